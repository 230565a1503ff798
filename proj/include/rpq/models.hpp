#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rpq/automaton.hpp"
#include "rpq/graph.hpp"

namespace rpq {

/// Labelled binomial random graph: every triple (u, a, v) over `node_count`
/// nodes exists independently with probability p(a).
struct GilbertModel {
    std::uint64_t node_count = 0;
    std::map<std::string, double> p;

    double probability(const std::string& label) const;
};

/// Generative model whose out-degrees depend on the label of the edge that
/// reached the node. Rates are over the extended alphabet, so inverse steps
/// are modelled like any other label.
struct BayesModel {
    std::uint64_t node_count = 0;
    /// Fraction of nodes with at least one outgoing `label` step.
    std::map<Label, double> start_valid_prob;
    /// Mean outgoing `label` steps among those nodes.
    std::map<Label, double> start_rate;
    /// Mean outgoing `second` steps from the far end of a `first` step.
    std::map<std::pair<Label, Label>, double> cond_rate;
    std::vector<std::string> forward_labels;

    double valid_prob(const Label& l) const;
    double rate_at_start(const Label& l) const;
    double rate_after(const Label& in, const Label& out) const;
};

using GraphModel = std::variant<GilbertModel, BayesModel>;

/// p(a) = (count(a) / sample edges) * target_edges / target_nodes^2.
/// Throws ConfigError when the sample is empty, target_nodes is smaller than
/// the sample, or a probability would exceed one.
GilbertModel fit_gilbert(const LabeledGraph& sample, std::uint64_t target_nodes, std::uint64_t target_edges);

/// Rates estimated from two-step paths: cond_rate(a, b) = #(a then b) / #a.
BayesModel fit_bayes(const LabeledGraph& sample, std::optional<std::uint64_t> node_count = std::nullopt);

/// Cost of one bottom-up run, accounted like the S2 strategy.
struct CostSample {
    std::uint64_t q_bc = 0;
    std::uint64_t d_s2 = 0;
    std::uint64_t edges_traversed = 0;
    bool truncated = false;

    friend bool operator==(const CostSample&, const CostSample&) = default;
};

struct CostDistribution {
    std::vector<CostSample> samples;
    std::size_t run_count = 0;
    std::uint64_t seed = 0;
};

/// Runs the product search from virtual node 0 of a graph generated on demand
/// from `model`, stopping after `budget` product states.
CostSample sample_cost(const GraphModel& model, const QueryAutomaton& automaton, std::uint64_t seed,
                       std::size_t budget);

/// `runs` independent samples; run i uses stream derive_seed(seed, i).
/// Results are identical for any `threads` value.
CostDistribution monte_carlo(const GraphModel& model, const QueryAutomaton& automaton, std::size_t runs,
                             std::uint64_t seed, std::size_t budget, unsigned threads = 1);

/// True cost of the query from every node of `graph` as start node.
CostDistribution exact_cost_distribution(const LabeledGraph& graph, const QueryAutomaton& automaton,
                                         std::size_t budget);

enum class CostField { d_s2, q_bc, edges };

std::string to_string(CostField f);
std::uint64_t field_value(const CostSample& s, CostField f);

struct CcdfPoint {
    std::uint64_t threshold = 0;
    double fraction = 0.0; // share of samples strictly above threshold
};

/// Empirical CCDF at each distinct sample value, ascending. With
/// `nonzero_only`, zero-valued samples are dropped first.
std::vector<CcdfPoint> ccdf(const CostDistribution& dist, CostField field, bool nonzero_only = false);

/// Smallest sample value v with P(X <= v) >= q. Empty input gives 0.
std::uint64_t quantile(const CostDistribution& dist, CostField field, double q, bool nonzero_only = false);

double zero_cost_fraction(const CostDistribution& dist);
double truncated_fraction(const CostDistribution& dist);

/// `threshold,ccdf` rows.
void write_ccdf_csv(std::ostream& out, const std::vector<CcdfPoint>& points);

/// D_s1 from sample label frequencies: 3 * edges * (sum of query-label
/// counts) / sample edges. Throws ConfigError on an empty sample.
double estimate_ds1(const Query& query, const LabelStats& sample_stats, double estimated_edges);

} // namespace rpq
