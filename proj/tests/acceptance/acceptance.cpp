// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rpq/cost_model.hpp"
#include "rpq/engine.hpp"
#include "rpq/models.hpp"
#include "rpq/netsim.hpp"
#include "rpq/strategies.hpp"
#include "support/oracle.hpp"

using namespace rpq;

namespace {

struct Verdict {
    bool ok = true;
    std::string detail;
};

Verdict fail(const std::string& why) { return {false, why}; }

// 1. Fixture answers for the worked query.
Verdict fixture_answers() {
    const auto g = rpqtest::fixture();
    const auto r = evaluate(g, Query::single_source(parse_regex("a* b b"), "1"));
    const auto got = rpqtest::names(g, r.answers);
    if (got != std::set<std::string>{"5", "8"}) return fail("answers differ from {5, 8}");
    const auto lines = answer_lines(r, g);
    if (lines != std::vector<std::string>{"5", "8"}) return fail("answer lines not sorted as 5, 8");
    return {true, "a* b b from 1 -> {5, 8}"};
}

// 2 and 9. Random instances against the relation-algebra oracle, with the
// product-size bound checked along the way.
struct OracleStats {
    int instances = 0;
    int mismatches = 0;
    int bound_violations = 0;
    std::size_t max_ratio_num = 0, max_ratio_den = 1;
};

OracleStats run_oracle_instances(int count) {
    OracleStats s;
    SplitMix64 rng(20240601);
    for (int i = 0; i < count; ++i) {
        const auto n = 1 + static_cast<std::uint32_t>(uniform_below(rng, 12));
        const auto g = rpqtest::random_graph(rng, n, 3, static_cast<std::uint32_t>(uniform_below(rng, 3 * n + 1)));
        const auto ast = rpqtest::random_regex(rng, 1 + static_cast<int>(uniform_below(rng, 4)));
        const auto relation = rpqtest::oracle_relation(g, ast);
        const auto multi = Query::multi_source(ast);
        const auto bound = multi.automaton.state_count() * g.node_count();

        const auto m = evaluate(g, multi);
        std::set<rpqtest::Pair> pairs;
        for (const auto& [a, b] : m.pairs) pairs.emplace(a.value, b.value);
        if (pairs != relation) ++s.mismatches;
        if (m.visited_states > bound) ++s.bound_violations;

        const auto start = static_cast<std::uint32_t>(uniform_below(rng, n));
        const auto r = evaluate(g, Query::single_source(ast, std::to_string(start)));
        std::set<std::uint32_t> answers;
        for (const auto v : r.answers) answers.insert(v.value);
        if (answers != rpqtest::oracle_answers(relation, start)) ++s.mismatches;
        if (r.visited_states > bound) ++s.bound_violations;
        if (bound != 0 && r.visited_states * s.max_ratio_den > s.max_ratio_num * bound) {
            s.max_ratio_num = r.visited_states;
            s.max_ratio_den = bound;
        }
        ++s.instances;
    }
    return s;
}

// 3, 4 and 5 share one sweep over random networks.
struct NetworkStats {
    int instances = 0;
    int answer_mismatches = 0;
    int floods = 0;
    int flood_violations = 0;
    int exact = 0;
    int reconciliation_failures = 0;
};

NetworkStats run_network_instances(int count) {
    NetworkStats s;
    SplitMix64 rng(8675309);
    for (int i = 0; i < count; ++i) {
        const auto n = 2 + static_cast<std::uint32_t>(uniform_below(rng, 25));
        const auto g = rpqtest::random_graph(rng, n, 3, static_cast<std::uint32_t>(uniform_below(rng, 3 * n)));
        const auto ast = rpqtest::random_regex(rng, 3, {.labels = 3, .inverse = true, .wildcard = i % 7 == 0});
        const auto query = i % 4 == 0 ? Query::multi_source(ast)
                                      : Query::single_source(ast, std::to_string(uniform_below(rng, n)));

        NetworkConfig c;
        c.peers = 3 + static_cast<std::uint32_t>(uniform_below(rng, 30));
        c.seed = rng();
        c.client_peer = static_cast<PeerId>(uniform_below(rng, c.peers));
        if (i % 2 == 0) {
            c.topology.kind = Topology::Kind::erdos_renyi;
            c.topology.probability = 0.25;
        } else {
            c.topology.kind = Topology::Kind::random_regular;
            c.topology.degree = c.peers % 2 == 0 ? 3 : 2;
        }
        // Half the runs use an integral number of copies per edge.
        const auto copies = 1 + static_cast<std::int64_t>(uniform_below(rng, std::min<std::uint32_t>(c.peers, 5)));
        c.replication = i % 2 == 0 ? Rational(copies, c.peers)
                                   : Rational(1 + static_cast<std::int64_t>(uniform_below(rng, 4 * c.peers)),
                                              4 * static_cast<std::int64_t>(c.peers));
        if (c.replication * Rational(c.peers) < Rational(1)) c.replication = Rational(1, c.peers);
        PeerNetwork net(g, c);

        StrategyOptions opts;
        opts.allow_full_retrieval = true;
        const auto local = evaluate(g, query);
        const auto s1 = run_s1(net, query, opts);
        const auto s2 = run_s2(net, query, opts);
        ++s.instances;
        if (s1.result.answers != local.answers || s2.result.answers != local.answers ||
            s1.result.pairs != local.pairs || s2.result.pairs != local.pairs) {
            ++s.answer_mismatches;
        }

        const auto n_c = net.topology().link_count();
        const auto flood = net.broadcast(Ping{});
        ++s.floods;
        if (flood.messages < n_c || flood.messages > 2 * n_c || flood.messages != 2 * n_c - c.peers + 1) {
            ++s.flood_violations;
        }

        if (net.exact_replication()) {
            ++s.exact;
            const auto p = params_of(net);
            const auto inputs = inputs_from_records(s1.cost, s2.cost);
            const auto two_nc = 2 * static_cast<std::int64_t>(n_c);
            const Rational want_s1(two_nc * static_cast<std::int64_t>(*s1.cost.q_lbl) +
                                   static_cast<std::int64_t>(s1.cost.measured_unicast_symbols));
            const Rational want_s2(two_nc * static_cast<std::int64_t>(*s2.cost.q_bc) +
                                   static_cast<std::int64_t>(s2.cost.measured_unicast_symbols));
            if (cost_s1(p, inputs) != want_s1 || cost_s2(p, inputs) != want_s2) ++s.reconciliation_failures;
        }
    }
    return s;
}

// 6. The worked network scenario.
Verdict scenario_replay() {
    const NetworkParams p{150, Rational(3), Rational(1, 5)};
    const CostInputs low{18, 1800, 70, 15};
    const CostInputs high{18, 1800, 8000, 1800};
    const auto d = discriminant(low);
    if (d.kind != Discriminant::Kind::value) return fail("discriminant undefined");
    const double discr = to_double(d.value);
    const double ratio = to_double(p.k / p.d);
    std::ostringstream msg;
    msg << "discr=" << discr << " k/d=" << ratio;
    if (std::abs(discr - 0.0583) > 0.0005) return fail(msg.str() + " (discr off)");
    if (std::abs(ratio - 0.0667) > 0.0001) return fail(msg.str() + " (k/d off)");
    if (classify(p, low) != Strategy::s2) return fail(msg.str() + " (likely case not S2)");
    const auto r = recommend(p, low, high, 0.9);
    if (r.strategy != Strategy::s2 || std::abs(r.confidence - 0.9) > 1e-12) return fail(msg.str() + " (recommendation)");
    msg << " -> S2 with confidence " << r.confidence;
    return {true, msg.str()};
}

// 7. Gilbert calibration on a uniform random graph.
Verdict gilbert_calibration() {
    SplitMix64 rng(31337);
    const std::uint32_t nodes = 10000;
    const auto g = rpqtest::random_graph(rng, nodes, 3, 15000);
    const auto model = fit_gilbert(g, g.node_count(), g.edge_count());
    const std::size_t runs = 10000;

    const double p = model.probability("a");
    const double v = static_cast<double>(g.node_count());
    const auto first = monte_carlo(model, QueryAutomaton::compile(parse_regex("a")), runs, 1, 1000);
    double sum = 0.0;
    for (const auto& s : first.samples) sum += static_cast<double>(s.edges_traversed);
    const double mean = sum / static_cast<double>(runs);
    const double expect = v * p;
    const double tol = 3.0 * std::sqrt(v * p * (1.0 - p)) / std::sqrt(static_cast<double>(runs));

    const auto query = Query::multi_source(parse_regex("a b*"));
    const double invalid = 1.0 - static_cast<double>(valid_start_nodes(g, query).size()) / v;
    const auto dist = monte_carlo(model, query.automaton, runs, 2, 1000);
    const double zero = zero_cost_fraction(dist);

    std::ostringstream msg;
    msg << "mean " << mean << " vs " << expect << " +/- " << tol << "; zero-cost " << zero << " vs invalid " << invalid;
    if (std::abs(mean - expect) > tol) return fail(msg.str());
    if (std::abs(zero - invalid) > 0.02) return fail(msg.str());
    return {true, msg.str()};
}

// 8. A graph with b-cliques: the independence model should underestimate and
// the one-step dependency model overestimate the non-zero cost quantiles.
Verdict clustered_ordering() {
    SplitMix64 rng(4242);
    const std::uint32_t nodes = 2000;
    LabeledGraph::Builder b;
    for (std::uint32_t v = 0; v < nodes; ++v) b.add_node(std::to_string(v));
    std::vector<std::uint32_t> order(nodes);
    for (std::uint32_t v = 0; v < nodes; ++v) order[v] = v;
    for (std::uint32_t i = nodes - 1; i > 0; --i) std::swap(order[i], order[uniform_below(rng, i + 1)]);
    std::uint32_t used = 0;
    while (used < nodes / 10) {
        const auto size = 3 + static_cast<std::uint32_t>(uniform_below(rng, 4));
        for (std::uint32_t i = 0; i < size; ++i) {
            for (std::uint32_t j = 0; j < size; ++j) {
                if (i != j) b.add_edge(std::to_string(order[used + i]), "b", std::to_string(order[used + j]));
            }
        }
        used += size;
    }
    for (int i = 0; i < 4000; ++i) {
        const auto* label = i % 2 == 0 ? "a" : "c";
        b.add_edge(std::to_string(uniform_below(rng, nodes)), label, std::to_string(uniform_below(rng, nodes)));
    }
    const auto g = std::move(b).build();
    const auto nfa = QueryAutomaton::compile(parse_regex("b+"));
    const std::size_t budget = 200;
    const auto exact = exact_cost_distribution(g, nfa, budget);
    const auto gilbert = monte_carlo(fit_gilbert(g, g.node_count(), g.edge_count()), nfa, 20000, 5, budget);
    const auto bayes = monte_carlo(fit_bayes(g), nfa, 20000, 6, budget);

    int held = 0;
    std::ostringstream msg;
    for (const double q : {0.5, 0.75, 0.9, 0.95}) {
        const auto lo = quantile(gilbert, CostField::edges, q, true);
        const auto mid = quantile(exact, CostField::edges, q, true);
        const auto hi = quantile(bayes, CostField::edges, q, true);
        const bool ok = lo <= mid && mid <= hi;
        held += ok ? 1 : 0;
        msg << "q" << q << ": " << lo << " <= " << mid << " <= " << hi << (ok ? "" : " (no)") << "; ";
    }
    msg << held << "/4 hold";
    return {held >= 3, msg.str()};
}

} // namespace

int main() {
    int failures = 0;
    const auto line = [&](int id, const char* name, const Verdict& v) {
        std::cout << (v.ok ? "PASS" : "FAIL") << ' ' << id << ' ' << name << ": " << v.detail << std::endl;
        if (!v.ok) ++failures;
    };
    const auto guarded = [](const std::function<Verdict()>& f) {
        try {
            return f();
        } catch (const std::exception& e) {
            return fail(std::string("exception: ") + e.what());
        }
    };

    line(1, "fixture-answers", guarded(fixture_answers));

    OracleStats oracle;
    const auto oracle_verdict = guarded([&] {
        oracle = run_oracle_instances(600);
        std::ostringstream msg;
        msg << oracle.instances << " instances, " << oracle.mismatches << " mismatches";
        return Verdict{oracle.instances >= 500 && oracle.mismatches == 0, msg.str()};
    });
    line(2, "oracle-agreement", oracle_verdict);

    NetworkStats net;
    const auto net_error = guarded([&] {
        net = run_network_instances(250);
        return Verdict{};
    });
    if (!net_error.ok) {
        line(3, "strategy-equivalence", net_error);
        line(4, "flood-identity", net_error);
        line(5, "cost-reconciliation", net_error);
    } else {
        std::ostringstream m3, m4, m5;
        m3 << net.instances << " instances, " << net.answer_mismatches << " mismatches";
        line(3, "strategy-equivalence", {net.instances >= 200 && net.answer_mismatches == 0, m3.str()});
        m4 << net.floods << " floods, " << net.flood_violations << " outside 2N_c-N_p+1";
        line(4, "flood-identity", {net.floods >= 200 && net.flood_violations == 0, m4.str()});
        m5 << net.exact << " exact-placement runs, " << net.reconciliation_failures << " mismatches";
        line(5, "cost-reconciliation", {net.exact >= 50 && net.reconciliation_failures == 0, m5.str()});
    }

    line(6, "scenario-replay", guarded(scenario_replay));
    line(7, "gilbert-calibration", guarded(gilbert_calibration));
    line(8, "clustered-ordering", guarded(clustered_ordering));

    if (oracle_verdict.ok || oracle.instances > 0) {
        std::ostringstream msg;
        msg << oracle.instances << " instances, " << oracle.bound_violations << " over states*|V|, max ratio "
            << static_cast<double>(oracle.max_ratio_num) / static_cast<double>(oracle.max_ratio_den);
        line(9, "product-bound", {oracle.instances >= 500 && oracle.bound_violations == 0, msg.str()});
    } else {
        line(9, "product-bound", oracle_verdict);
    }
    return failures == 0 ? 0 : 1;
}
