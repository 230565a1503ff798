#include "rpq/strategies.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include "rpq/error.hpp"
#include "rpq/lookup_cache.hpp"

namespace rpq {

std::string to_string(Strategy s) { return s == Strategy::s1 ? "S1" : "S2"; }

namespace {

/// Answers neighbour requests by flooding a lookup through the network.
class NetworkLookupSource final : public EdgeSource {
public:
    explicit NetworkLookupSource(PeerNetwork& network) : network_(network) {}

    std::vector<Neighbor> neighbors(NodeId v, const SymbolSet& wanted) override {
        std::vector<Neighbor> steps;
        for (auto& r : network_.broadcast(NeighborLookup{v, wanted}).responses) {
            steps.insert(steps.end(), r.steps.begin(), r.steps.end());
        }
        // Replicas of the same edge collapse.
        std::sort(steps.begin(), steps.end());
        steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
        return steps;
    }

    std::vector<NodeId> all_nodes() override {
        std::vector<NodeId> nodes(network_.graph().node_count());
        for (std::uint32_t i = 0; i < nodes.size(); ++i) nodes[i] = NodeId{i};
        return nodes;
    }

private:
    PeerNetwork& network_;
};

void fill_measured(CostRecord& record, const LedgerRow& row) {
    record.measured_broadcast_symbols = row.broadcast_symbols;
    record.measured_unicast_symbols = row.unicast_symbols;
    record.distinct_broadcasts = row.broadcasts;
    record.broadcast_messages = row.broadcast_messages;
    record.unicast_messages = row.unicast_messages;
}

std::size_t answer_count(const QueryResult& r) { return r.answers.size() + r.pairs.size(); }

} // namespace

StrategyRun run_s1(PeerNetwork& network, const Query& query, const StrategyOptions& options) {
    if (query.uses_wildcard && !options.allow_full_retrieval) {
        throw RefusalError(
            "top-down retrieval of a wildcard query downloads every edge of the data graph from every replica; "
            "pass the full-retrieval flag to proceed");
    }
    network.ledger().begin_phase("s1");
    ByLabels request;
    request.labels = query.distinct_labels;
    request.all_labels = query.uses_wildcard;
    const auto outcome = network.broadcast(request);

    const auto& g = network.graph();
    std::set<std::uint32_t> downloaded;
    for (const auto& r : outcome.responses) downloaded.insert(r.edges.begin(), r.edges.end());

    // Node identifiers are interned in the data graph's order so answers keep
    // their ids.
    LabeledGraph::Builder builder;
    for (std::uint32_t i = 0; i < g.node_count(); ++i) builder.add_node(g.node_name(NodeId{i}));
    for (const auto e : downloaded) {
        const auto& t = g.edges()[e];
        builder.add_edge(g.node_name(NodeId{t.src}), g.label_name(t.label), g.node_name(NodeId{t.dst}));
    }
    const auto local = std::move(builder).build();

    StrategyRun run;
    EvalOptions eval;
    eval.witness = options.witness;
    run.result = evaluate(local, query, eval);

    auto& cost = run.cost;
    cost.strategy = Strategy::s1;
    cost.q_lbl = size_in_symbols(request);
    cost.d_s1 = 3 * downloaded.size();
    cost.retrieved_edges = downloaded.size();
    cost.answer_count = answer_count(run.result);
    fill_measured(cost, network.ledger().rows().back());
    return run;
}

StrategyRun run_s2(PeerNetwork& network, const Query& query, const StrategyOptions& options) {
    network.ledger().begin_phase("s2");
    NetworkLookupSource remote(network);
    CachedLookupSource cached(remote);

    EvalOptions eval;
    eval.witness = options.witness;
    eval.max_edges = options.budget;

    StrategyRun run;
    const auto& g = network.graph();
    if (query.is_single_source()) {
        if (const auto start = g.find_node(query.start)) {
            run.result = eval_single_source(cached, query.automaton, *start, eval);
        } else {
            // The client cannot know the start node is absent; the first
            // lookup still goes out and comes back empty.
            const auto first = first_labels(query);
            if (!first.empty()) cached.neighbors(NodeId{static_cast<std::uint32_t>(g.node_count())}, first);
        }
    } else {
        run.result = eval_multi_source(cached, query.automaton, eval);
        run.cost.expensive_multi_source = true;
    }

    auto& cost = run.cost;
    cost.strategy = Strategy::s2;
    cost.q_bc = cached.broadcast_symbols();
    cost.d_s2 = cached.retrieved_symbols();
    std::set<ExtendedEdge> base;
    for (const auto& e : cached.retrieved_edges()) base.insert(e.base());
    cost.retrieved_edges = base.size();
    cost.answer_count = answer_count(run.result);
    cost.truncated = run.result.truncated;
    fill_measured(cost, network.ledger().rows().back());
    return run;
}

StrategyRun run_strategy(Strategy strategy, PeerNetwork& network, const Query& query, const StrategyOptions& options) {
    return strategy == Strategy::s1 ? run_s1(network, query, options) : run_s2(network, query, options);
}

void write_cost_header(std::ostream& out) {
    out << "strategy,q_lbl,d_s1,q_bc,d_s2,measured_broadcast_symbols,measured_unicast_symbols,"
           "distinct_broadcasts,broadcast_msgs,unicast_msgs,retrieved_edges,answers,truncated\n";
}

void write_cost_row(std::ostream& out, const CostRecord& r) {
    const auto opt = [&](const std::optional<std::uint64_t>& v) {
        if (v) out << *v;
        out << ',';
    };
    out << to_string(r.strategy) << ',';
    opt(r.q_lbl);
    opt(r.d_s1);
    opt(r.q_bc);
    opt(r.d_s2);
    out << r.measured_broadcast_symbols << ',' << r.measured_unicast_symbols << ',' << r.distinct_broadcasts << ','
        << r.broadcast_messages << ',' << r.unicast_messages << ',' << r.retrieved_edges << ',' << r.answer_count << ','
        << (r.truncated ? 1 : 0) << '\n';
}

} // namespace rpq
