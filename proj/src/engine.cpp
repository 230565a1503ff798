#include "rpq/engine.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace rpq {

std::vector<NodeId> GraphEdgeSource::all_nodes() {
    std::vector<NodeId> nodes(graph_.node_count());
    for (std::uint32_t i = 0; i < nodes.size(); ++i) nodes[i] = NodeId{i};
    return nodes;
}

namespace {

using StateKey = std::uint64_t;

constexpr StateKey key_of(StateId q, NodeId v) noexcept {
    return (static_cast<std::uint64_t>(v.value) << 32) | q;
}
constexpr StateId state_of(StateKey k) noexcept { return static_cast<StateId>(k & 0xffffffffU); }
constexpr NodeId node_of(StateKey k) noexcept { return NodeId{static_cast<std::uint32_t>(k >> 32)}; }

struct Parent {
    StateKey from;
    ExtendedEdge edge;
};

/// One breadth-first search of the product from a single seed.
class ProductSearch {
public:
    ProductSearch(EdgeSource& source, const QueryAutomaton& automaton, const EvalOptions& options,
                  QueryResult& result, std::unordered_set<StateKey>* union_visited)
        : source_(source), automaton_(automaton), options_(options), result_(result), union_visited_(union_visited) {}

    /// Calls `on_answer(node, key)` for every node reached in an accepting
    /// state, once per (state, node).
    template <typename OnAnswer>
    void run(NodeId seed, OnAnswer&& on_answer) {
        push(key_of(automaton_.initial(), seed), std::nullopt);
        while (!queue_.empty()) {
            if (budget_exhausted()) {
                result_.truncated = true;
                return;
            }
            const auto key = queue_.front();
            queue_.pop_front();
            ++result_.expansions;
            const auto q = state_of(key);
            const auto v = node_of(key);
            const auto& moves = automaton_.moves(q);
            if (moves.accepting) on_answer(v, key);
            if (moves.symbols.empty()) continue;

            for (const auto& nb : source_.neighbors(v, moves.symbols)) {
                bool used = false;
                for (const auto& t : moves.transitions) {
                    if (!t.symbol.matches(nb.label)) continue;
                    used = true;
                    push(key_of(t.target, nb.node), Parent{key, ExtendedEdge{v, nb.label, nb.node}});
                }
                if (used) result_.traversed_edges.insert(ExtendedEdge{v, nb.label, nb.node});
            }
        }
    }

    Path path_to(StateKey key) const {
        Path path;
        for (auto it = parents_.find(key); it != parents_.end(); it = parents_.find(it->second.from)) {
            path.push_back(it->second.edge);
        }
        std::reverse(path.begin(), path.end());
        return path;
    }

private:
    bool budget_exhausted() const {
        if (options_.max_states && visited_.size() > *options_.max_states) return true;
        if (options_.max_edges && result_.traversed_edges.size() >= *options_.max_edges) return true;
        return false;
    }

    void push(StateKey key, std::optional<Parent> parent) {
        if (!visited_.insert(key).second) return;
        if (union_visited_ != nullptr) union_visited_->insert(key);
        if (options_.witness && parent) parents_.emplace(key, *parent);
        queue_.push_back(key);
    }

    EdgeSource& source_;
    const QueryAutomaton& automaton_;
    const EvalOptions& options_;
    QueryResult& result_;
    std::unordered_set<StateKey>* union_visited_;
    std::unordered_set<StateKey> visited_;
    std::unordered_map<StateKey, Parent> parents_;
    std::deque<StateKey> queue_;
};

} // namespace

QueryResult eval_single_source(EdgeSource& source, const QueryAutomaton& automaton, NodeId start,
                               const EvalOptions& options) {
    QueryResult result;
    std::unordered_set<StateKey> visited;
    ProductSearch search(source, automaton, options, result, &visited);
    search.run(start, [&](NodeId v, StateKey key) {
        if (result.answers.insert(v).second && options.witness) result.witnesses.emplace(v, search.path_to(key));
    });
    result.visited_states = visited.size();
    return result;
}

QueryResult eval_multi_source(EdgeSource& source, const QueryAutomaton& automaton, const EvalOptions& options) {
    QueryResult result;
    result.has_epsilon_pairs = automaton.accepts_empty();
    std::unordered_set<StateKey> union_visited;
    for (const auto seed : source.all_nodes()) {
        if (options.max_states && union_visited.size() > *options.max_states) {
            result.truncated = true;
            break;
        }
        ProductSearch search(source, automaton, options, result, &union_visited);
        search.run(seed, [&](NodeId v, StateKey key) {
            const NodePair pair{seed, v};
            if (result.pairs.insert(pair).second && options.witness) {
                result.pair_witnesses.emplace(pair, search.path_to(key));
            }
        });
        if (result.truncated) break;
    }
    result.visited_states = union_visited.size();
    return result;
}

QueryResult evaluate(const LabeledGraph& graph, const Query& query, const EvalOptions& options) {
    GraphEdgeSource source(graph);
    if (!query.is_single_source()) return eval_multi_source(source, query.automaton, options);
    const auto start = graph.find_node(query.start);
    if (!start) return {};
    return eval_single_source(source, query.automaton, *start, options);
}

std::set<NodeId> valid_start_nodes(const LabeledGraph& graph, const Query& query) {
    const auto first = first_labels(query);
    std::set<NodeId> nodes;
    if (first.empty()) return nodes;
    for (std::uint32_t i = 0; i < graph.node_count(); ++i) {
        if (!graph.extended_neighbors(NodeId{i}, first).empty()) nodes.insert(NodeId{i});
    }
    return nodes;
}

bool natural_less(const std::string& a, const std::string& b) {
    const auto numeric = [](const std::string& s) {
        return !s.empty() && s.size() <= 18 && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    const bool na = numeric(a);
    const bool nb = numeric(b);
    if (na && nb) {
        const auto x = std::stoll(a);
        const auto y = std::stoll(b);
        if (x != y) return x < y;
        return a < b;
    }
    if (na != nb) return na;
    return a < b;
}

std::vector<std::string> answer_lines(const QueryResult& result, const LabeledGraph& graph) {
    std::vector<std::string> lines;
    if (!result.pairs.empty()) {
        std::vector<std::pair<std::string, std::string>> pairs;
        for (const auto& [a, b] : result.pairs) pairs.emplace_back(graph.node_name(a), graph.node_name(b));
        std::sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
            if (x.first != y.first) return natural_less(x.first, y.first);
            return natural_less(x.second, y.second);
        });
        for (const auto& [a, b] : pairs) lines.push_back(a + '\t' + b);
        return lines;
    }
    for (const auto v : result.answers) lines.push_back(graph.node_name(v));
    std::sort(lines.begin(), lines.end(), natural_less);
    return lines;
}

std::string format_path(const Path& path, const LabeledGraph& graph) {
    std::string out;
    for (const auto& e : path) {
        if (out.empty()) out = graph.node_name(e.from);
        out += " -" + to_string(e.label) + "-> " + graph.node_name(e.to);
    }
    return out;
}

} // namespace rpq
