#include "rpq/models.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>
#include <tuple>
#include <unordered_map>

#include <boost/random/binomial_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

#include "rpq/error.hpp"
#include "rpq/lookup_cache.hpp"
#include "rpq/random.hpp"

namespace rpq {

double GilbertModel::probability(const std::string& label) const {
    const auto it = p.find(label);
    return it == p.end() ? 0.0 : it->second;
}

namespace {

template <typename Map, typename Key>
double lookup_or_zero(const Map& m, const Key& k) {
    const auto it = m.find(k);
    return it == m.end() ? 0.0 : it->second;
}

std::uint32_t draw_binomial(SplitMix64& rng, std::uint64_t trials, double p) {
    if (p <= 0.0 || trials == 0) return 0;
    if (p >= 1.0) return static_cast<std::uint32_t>(trials);
    boost::random::binomial_distribution<std::int64_t, double> dist(static_cast<std::int64_t>(trials), p);
    return static_cast<std::uint32_t>(dist(rng));
}

std::uint32_t draw_poisson(SplitMix64& rng, double mean) {
    if (mean <= 0.0) return 0;
    boost::random::poisson_distribution<std::int64_t, double> dist(mean);
    return static_cast<std::uint32_t>(dist(rng));
}

struct MemoKey {
    std::uint32_t node;
    Label label;
    friend bool operator<(const MemoKey& a, const MemoKey& b) {
        return std::tie(a.node, a.label) < std::tie(b.node, b.label);
    }
};

/// Virtual graph generated on first request and memoised per (node, label),
/// so repeated requests within one run see the same edges.
class VirtualGraphSource : public EdgeSource {
public:
    VirtualGraphSource(std::uint64_t node_count, std::vector<std::string> forward_labels, std::uint64_t seed)
        : node_count_(static_cast<std::uint32_t>(std::min<std::uint64_t>(node_count, UINT32_MAX))),
          forward_labels_(std::move(forward_labels)), rng_(seed) {}

    std::vector<Neighbor> neighbors(NodeId v, const SymbolSet& wanted) override {
        std::vector<Neighbor> out;
        const auto add = [&](const Label& label) {
            for (const auto w : generated(v, label)) out.push_back({label, w});
        };
        for (const auto& s : wanted) {
            if (s.is_wildcard()) {
                for (const auto& name : forward_labels_) add(Label::forward(name));
            } else {
                add(s.label);
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    std::vector<NodeId> all_nodes() override { return {NodeId{0}}; }

protected:
    virtual std::uint32_t draw_degree(NodeId v, const Label& label) = 0;
    virtual void on_reached(NodeId /*w*/, const Label& /*via*/) {}

    SplitMix64& rng() { return rng_; }

private:
    const std::vector<NodeId>& generated(NodeId v, const Label& label) {
        MemoKey key{v.value, label};
        if (const auto it = memo_.find(key); it != memo_.end()) return it->second;
        const auto degree = std::min(draw_degree(v, label), node_count_);
        std::vector<NodeId> targets;
        targets.reserve(degree);
        for (const auto t : sample_distinct(rng_, node_count_, degree)) {
            targets.push_back(NodeId{t});
            on_reached(NodeId{t}, label);
        }
        std::sort(targets.begin(), targets.end());
        return memo_.emplace(std::move(key), std::move(targets)).first->second;
    }

    std::uint32_t node_count_;
    std::vector<std::string> forward_labels_;
    SplitMix64 rng_;
    std::map<MemoKey, std::vector<NodeId>> memo_;
};

class GilbertSource final : public VirtualGraphSource {
public:
    GilbertSource(const GilbertModel& model, std::uint64_t seed)
        : VirtualGraphSource(model.node_count, labels_of(model), seed), model_(model) {}

private:
    static std::vector<std::string> labels_of(const GilbertModel& m) {
        std::vector<std::string> names;
        for (const auto& [name, p] : m.p) names.push_back(name);
        return names;
    }

    // In-degree and out-degree share the Binomial(V, p) law, so inverse
    // steps draw the same way.
    std::uint32_t draw_degree(NodeId, const Label& label) override {
        return draw_binomial(rng(), model_.node_count, model_.probability(label.name));
    }

    const GilbertModel& model_;
};

class BayesSource final : public VirtualGraphSource {
public:
    BayesSource(const BayesModel& model, std::uint64_t seed)
        : VirtualGraphSource(model.node_count, model.forward_labels, seed), model_(model) {}

private:
    static constexpr NodeId kStart{0};

    std::uint32_t draw_degree(NodeId v, const Label& label) override {
        if (v == kStart) {
            // Valid with the observed probability, then at least one step with
            // mean start_rate.
            if (uniform_unit(rng()) >= model_.valid_prob(label)) return 0;
            return 1 + draw_poisson(rng(), model_.rate_at_start(label) - 1.0);
        }
        const auto it = arrival_.find(v.value);
        if (it == arrival_.end()) return 0;
        return draw_poisson(rng(), model_.rate_after(it->second, label));
    }

    void on_reached(NodeId w, const Label& via) override {
        if (w != kStart) arrival_.try_emplace(w.value, via);
    }

    const BayesModel& model_;
    std::unordered_map<std::uint32_t, Label> arrival_;
};

CostSample run_accounted(EdgeSource& source, const QueryAutomaton& automaton, NodeId start, std::size_t budget) {
    CachedLookupSource cached(source);
    EvalOptions options;
    options.max_states = budget;
    const auto result = eval_single_source(cached, automaton, start, options);
    return {cached.broadcast_symbols(), cached.retrieved_symbols(), result.traversed_edges.size(), result.truncated};
}

} // namespace

double BayesModel::valid_prob(const Label& l) const { return lookup_or_zero(start_valid_prob, l); }
double BayesModel::rate_at_start(const Label& l) const { return lookup_or_zero(start_rate, l); }
double BayesModel::rate_after(const Label& in, const Label& out) const {
    return lookup_or_zero(cond_rate, std::make_pair(in, out));
}

GilbertModel fit_gilbert(const LabeledGraph& sample, std::uint64_t target_nodes, std::uint64_t target_edges) {
    if (sample.edge_count() == 0) throw ConfigError("cannot fit a model on an empty sample");
    if (target_nodes < sample.node_count()) {
        throw ConfigError("target node count " + std::to_string(target_nodes) + " is below the sample's " +
                          std::to_string(sample.node_count()));
    }
    GilbertModel model;
    model.node_count = target_nodes;
    const auto stats = label_stats(sample);
    // Long double keeps V^2 exact well past 2^32 nodes.
    const long double pairs = static_cast<long double>(target_nodes) * static_cast<long double>(target_nodes);
    for (const auto& [label, count] : stats.counts) {
        const long double share = static_cast<long double>(count) / static_cast<long double>(stats.edge_count);
        const auto p = static_cast<double>(share * static_cast<long double>(target_edges) / pairs);
        if (p > 1.0) throw ConfigError("edge probability for '" + label + "' exceeds one; raise the node count");
        model.p[label] = p;
    }
    return model;
}

BayesModel fit_bayes(const LabeledGraph& sample, std::optional<std::uint64_t> node_count) {
    if (sample.edge_count() == 0) throw ConfigError("cannot fit a model on an empty sample");
    BayesModel model;
    model.node_count = node_count.value_or(sample.node_count());
    if (model.node_count < sample.node_count()) throw ConfigError("model node count is below the sample's");

    std::map<Label, std::uint64_t> edges_with;   // extended edges per label
    std::map<Label, std::uint64_t> nodes_with;   // nodes with >= 1 outgoing step
    std::map<std::pair<Label, Label>, std::uint64_t> two_step;
    for (std::uint32_t i = 0; i < sample.node_count(); ++i) {
        std::map<Label, std::uint64_t> out;
        for (const auto& nb : sample.all_extended_neighbors(NodeId{i})) ++out[nb.label];
        // Steps arriving here are the mirrors of steps leaving here.
        for (const auto& [label, n] : out) {
            edges_with[label] += n;
            ++nodes_with[label];
        }
        for (const auto& [in_mirror, n_in] : out) {
            const auto in = in_mirror.mirrored();
            for (const auto& [next, n_out] : out) two_step[{in, next}] += n_in * n_out;
        }
    }
    const auto nodes = static_cast<double>(sample.node_count());
    for (const auto& [label, n] : nodes_with) {
        model.start_valid_prob[label] = static_cast<double>(n) / nodes;
        model.start_rate[label] = static_cast<double>(edges_with[label]) / static_cast<double>(n);
    }
    for (const auto& [pair, n] : two_step) {
        model.cond_rate[pair] = static_cast<double>(n) / static_cast<double>(edges_with[pair.first]);
    }
    for (const auto& [label, count] : label_stats(sample).counts) model.forward_labels.push_back(label);
    return model;
}

CostSample sample_cost(const GraphModel& model, const QueryAutomaton& automaton, std::uint64_t seed,
                       std::size_t budget) {
    if (budget == 0) throw ConfigError("budget must be positive");
    return std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, GilbertModel>) {
                GilbertSource source(m, seed);
                return run_accounted(source, automaton, NodeId{0}, budget);
            } else {
                BayesSource source(m, seed);
                return run_accounted(source, automaton, NodeId{0}, budget);
            }
        },
        model);
}

CostDistribution monte_carlo(const GraphModel& model, const QueryAutomaton& automaton, std::size_t runs,
                             std::uint64_t seed, std::size_t budget, unsigned threads) {
    if (runs < 1) throw ConfigError("at least one run is required");
    if (budget == 0) throw ConfigError("budget must be positive");
    CostDistribution dist;
    dist.run_count = runs;
    dist.seed = seed;
    dist.samples.resize(runs);
    const auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < runs; i += stride) {
            dist.samples[i] = sample_cost(model, automaton, derive_seed(seed, i), budget);
        }
    };
    threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(runs)));
    if (threads == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    }
    return dist;
}

CostDistribution exact_cost_distribution(const LabeledGraph& graph, const QueryAutomaton& automaton,
                                         std::size_t budget) {
    CostDistribution dist;
    dist.run_count = graph.node_count();
    dist.samples.reserve(graph.node_count());
    GraphEdgeSource source(graph);
    for (std::uint32_t i = 0; i < graph.node_count(); ++i) {
        dist.samples.push_back(run_accounted(source, automaton, NodeId{i}, budget));
    }
    return dist;
}

std::string to_string(CostField f) {
    switch (f) {
    case CostField::d_s2: return "d_s2";
    case CostField::q_bc: return "q_bc";
    case CostField::edges: return "edges";
    }
    return "unknown";
}

std::uint64_t field_value(const CostSample& s, CostField f) {
    switch (f) {
    case CostField::d_s2: return s.d_s2;
    case CostField::q_bc: return s.q_bc;
    case CostField::edges: return s.edges_traversed;
    }
    return 0;
}

namespace {

std::vector<std::uint64_t> sorted_values(const CostDistribution& dist, CostField field, bool nonzero_only) {
    std::vector<std::uint64_t> values;
    values.reserve(dist.samples.size());
    for (const auto& s : dist.samples) {
        const auto v = field_value(s, field);
        if (!nonzero_only || v != 0) values.push_back(v);
    }
    std::sort(values.begin(), values.end());
    return values;
}

} // namespace

std::vector<CcdfPoint> ccdf(const CostDistribution& dist, CostField field, bool nonzero_only) {
    const auto values = sorted_values(dist, field, nonzero_only);
    std::vector<CcdfPoint> points;
    const auto n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size();) {
        auto j = i;
        while (j < values.size() && values[j] == values[i]) ++j;
        points.push_back({values[i], static_cast<double>(values.size() - j) / n});
        i = j;
    }
    return points;
}

std::uint64_t quantile(const CostDistribution& dist, CostField field, double q, bool nonzero_only) {
    const auto values = sorted_values(dist, field, nonzero_only);
    if (values.empty()) return 0;
    const auto n = values.size();
    // Smallest index i with (i + 1) / n >= q.
    auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    if (rank == 0) rank = 1;
    return values[std::min(rank, n) - 1];
}

double zero_cost_fraction(const CostDistribution& dist) {
    if (dist.samples.empty()) return 0.0;
    const auto zeros = std::count_if(dist.samples.begin(), dist.samples.end(), [](const auto& s) { return s.d_s2 == 0; });
    return static_cast<double>(zeros) / static_cast<double>(dist.samples.size());
}

double truncated_fraction(const CostDistribution& dist) {
    if (dist.samples.empty()) return 0.0;
    const auto n = std::count_if(dist.samples.begin(), dist.samples.end(), [](const auto& s) { return s.truncated; });
    return static_cast<double>(n) / static_cast<double>(dist.samples.size());
}

void write_ccdf_csv(std::ostream& out, const std::vector<CcdfPoint>& points) {
    out << "threshold,ccdf\n";
    const auto old = out.precision(17);
    for (const auto& p : points) out << p.threshold << ',' << p.fraction << '\n';
    out.precision(old);
}

double estimate_ds1(const Query& query, const LabelStats& sample_stats, double estimated_edges) {
    if (sample_stats.edge_count == 0) throw ConfigError("cannot estimate D_s1 from an empty sample");
    std::uint64_t matching = 0;
    for (const auto& label : query.distinct_labels) {
        if (const auto it = sample_stats.counts.find(label); it != sample_stats.counts.end()) matching += it->second;
    }
    return 3.0 * estimated_edges * static_cast<double>(matching) / static_cast<double>(sample_stats.edge_count);
}

} // namespace rpq
