#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rpq/automaton.hpp"
#include "rpq/graph.hpp"

namespace rpq {

/// Where the product search reads the data graph from: a local graph, a
/// simulated peer network or a random-graph generator.
///
/// Within one query execution, repeated calls with the same arguments must
/// return the same result.
class EdgeSource {
public:
    virtual ~EdgeSource() = default;

    /// Extended steps leaving `v` whose label matches a symbol of `wanted`.
    virtual std::vector<Neighbor> neighbors(NodeId v, const SymbolSet& wanted) = 0;

    /// Node universe; only needed to seed multi-source searches.
    virtual std::vector<NodeId> all_nodes() = 0;
};

class GraphEdgeSource final : public EdgeSource {
public:
    explicit GraphEdgeSource(const LabeledGraph& graph) : graph_(graph) {}

    std::vector<Neighbor> neighbors(NodeId v, const SymbolSet& wanted) override {
        return graph_.extended_neighbors(v, wanted);
    }
    std::vector<NodeId> all_nodes() override;

private:
    const LabeledGraph& graph_;
};

struct EvalOptions {
    bool witness = false;
    /// Stop once this many product states have been visited.
    std::optional<std::size_t> max_states;
    /// Stop once this many distinct extended edges have been traversed.
    std::optional<std::size_t> max_edges;
};

using NodePair = std::pair<NodeId, NodeId>;
using Path = std::vector<ExtendedEdge>;

struct QueryResult {
    std::set<NodeId> answers;    // single-source
    std::set<NodePair> pairs;    // multi-source
    /// Distinct (automaton state, node) pairs visited. For multi-source runs
    /// this is the union over all seeds.
    std::size_t visited_states = 0;
    /// Product-state expansions, summed over seeds.
    std::size_t expansions = 0;
    std::set<ExtendedEdge> traversed_edges;
    std::map<NodeId, Path> witnesses;
    std::map<NodePair, Path> pair_witnesses;
    /// A budget stopped the search; answers may be incomplete.
    bool truncated = false;
    /// Multi-source only: the expression accepts the empty word, so every
    /// seed is paired with itself.
    bool has_epsilon_pairs = false;
};

/// Lazy product-automaton search from (initial state, `start`), breadth first.
QueryResult eval_single_source(EdgeSource& source, const QueryAutomaton& automaton, NodeId start,
                               const EvalOptions& options = {});

/// Single-source search seeded from every node of `source.all_nodes()`.
QueryResult eval_multi_source(EdgeSource& source, const QueryAutomaton& automaton,
                              const EvalOptions& options = {});

/// Evaluates `query` on a local graph. A single-source start node that is not
/// in the graph yields an empty result.
QueryResult evaluate(const LabeledGraph& graph, const Query& query, const EvalOptions& options = {});

/// Nodes with at least one extended edge matching a first symbol of `query`.
std::set<NodeId> valid_start_nodes(const LabeledGraph& graph, const Query& query);

/// Orders identifiers numerically when both are integers, lexically otherwise.
bool natural_less(const std::string& a, const std::string& b);

/// Sorted answer lines: one node per line, or `src<TAB>dst` for pairs.
std::vector<std::string> answer_lines(const QueryResult& result, const LabeledGraph& graph);

std::string format_path(const Path& path, const LabeledGraph& graph);

} // namespace rpq
