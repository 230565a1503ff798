// rpq: evaluate regular path queries, simulate their distributed execution
// and estimate their cost.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rpq/cost_model.hpp"
#include "rpq/engine.hpp"
#include "rpq/error.hpp"
#include "rpq/graph.hpp"
#include "rpq/models.hpp"
#include "rpq/netsim.hpp"
#include "rpq/regex.hpp"
#include "rpq/strategies.hpp"

namespace fs = std::filesystem;
using namespace rpq;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kParse = 2, kIo = 3, kConfig = 4, kRefusal = 5 };

struct Common {
    std::string classes;
    std::string output_dir = ".";
    std::uint64_t seed = 1;
};

struct NetworkFlags {
    std::uint32_t peers = 10;
    std::string topology = "regular";
    std::uint32_t degree = 3;
    double probability = 0.3;
    std::string replication = "0.2";
    std::uint32_t client = 0;
};

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    std::ofstream out(dir / name);
    if (!out) throw IoError("cannot write " + (dir / name).string());
    return out;
}

ClassTable classes_of(const Common& c) { return c.classes.empty() ? ClassTable{} : load_classes(c.classes); }

Query make_query(const std::string& expr, const std::optional<std::string>& start, const ClassTable& classes) {
    auto ast = parse_regex(expr, classes);
    return start ? Query::single_source(std::move(ast), *start) : Query::multi_source(std::move(ast));
}

void warn_unknown_start(const LabeledGraph& g, const Query& q) {
    if (q.is_single_source() && !g.find_node(q.start)) {
        std::cerr << "warning: start node '" << q.start << "' is not in the graph; no answers\n";
    }
}

void write_answers(const fs::path& dir, const std::string& name, const QueryResult& r, const LabeledGraph& g) {
    auto out = open_output(dir, name);
    for (const auto& line : answer_lines(r, g)) out << line << '\n';
}

NetworkConfig network_config(const NetworkFlags& f, std::uint64_t seed) {
    NetworkConfig c;
    c.peers = f.peers;
    c.seed = seed;
    c.client_peer = f.client;
    c.replication = parse_rational(f.replication);
    if (f.topology == "regular") {
        c.topology.kind = Topology::Kind::random_regular;
    } else if (f.topology == "erdos-renyi") {
        c.topology.kind = Topology::Kind::erdos_renyi;
    } else if (f.topology == "star") {
        c.topology.kind = Topology::Kind::star;
    } else {
        throw ConfigError("unknown topology '" + f.topology + "'");
    }
    c.topology.degree = f.degree;
    c.topology.probability = f.probability;
    return c;
}

void add_network_flags(CLI::App* cmd, NetworkFlags& f) {
    cmd->add_option("--peers", f.peers, "Number of peers N_p")->capture_default_str();
    cmd->add_option("--topology", f.topology, "regular | erdos-renyi | star")
        ->check(CLI::IsMember({"regular", "erdos-renyi", "star"}))
        ->capture_default_str();
    cmd->add_option("--degree", f.degree, "Links per peer (regular topology)")->capture_default_str();
    cmd->add_option("--probability", f.probability, "Link probability (erdos-renyi topology)")->capture_default_str();
    cmd->add_option("--replication", f.replication, "Replication rate k, e.g. 0.2 or 1/5")->capture_default_str();
    cmd->add_option("--client-peer", f.client, "Peer the client is attached to")->capture_default_str();
}

void add_common_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("--classes", c.classes, "Label class file for $NAME macros")->check(CLI::ExistingFile);
    cmd->add_option("--output-dir,-o", c.output_dir, "Directory for output files")->capture_default_str();
    cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
}

// ---- query ---------------------------------------------------------------------

struct QueryFlags {
    std::string graph;
    std::string expr;
    std::optional<std::string> start;
    std::optional<std::size_t> budget;
    bool witness = false;
};

int cmd_query(const Common& common, const QueryFlags& f) {
    const auto g = load_graph(f.graph);
    const auto q = make_query(f.expr, f.start, classes_of(common));
    warn_unknown_start(g, q);
    EvalOptions opts;
    opts.witness = f.witness;
    opts.max_edges = f.budget;
    const auto r = evaluate(g, q, opts);
    write_answers(common.output_dir, "answers.txt", r, g);
    std::cout << "answers=" << r.answers.size() + r.pairs.size() << " visited_states=" << r.visited_states
              << " traversed_edges=" << r.traversed_edges.size() << " truncated=" << (r.truncated ? 1 : 0) << '\n';
    if (r.has_epsilon_pairs) std::cout << "note: the expression matches the empty path; every node pairs with itself\n";
    if (f.witness) {
        for (const auto& [node, path] : r.witnesses) std::cout << g.node_name(node) << ": " << format_path(path, g) << '\n';
        for (const auto& [pair, path] : r.pair_witnesses) {
            std::cout << g.node_name(pair.first) << ' ' << g.node_name(pair.second) << ": " << format_path(path, g) << '\n';
        }
    }
    return kOk;
}

// ---- simulate ------------------------------------------------------------------

struct SimulateFlags {
    std::string graph;
    std::string expr;
    std::optional<std::string> start;
    std::string strategy = "s2";
    bool compare = false;
    std::optional<std::size_t> budget;
    bool allow_full = false;
    NetworkFlags network;
};

int cmd_simulate(const Common& common, const SimulateFlags& f) {
    const auto g = load_graph(f.graph);
    const auto q = make_query(f.expr, f.start, classes_of(common));
    warn_unknown_start(g, q);
    PeerNetwork net(g, network_config(f.network, common.seed));

    StrategyOptions opts;
    opts.allow_full_retrieval = f.allow_full;
    opts.budget = f.budget;

    std::vector<Strategy> order;
    if (f.compare) {
        order = {Strategy::s1, Strategy::s2};
    } else {
        order = {f.strategy == "s1" ? Strategy::s1 : Strategy::s2};
    }

    const fs::path dir = common.output_dir;
    auto costs = open_output(dir, "costs.csv");
    write_cost_header(costs);
    std::map<Strategy, CostRecord> records;
    for (const auto s : order) {
        const auto run = run_strategy(s, net, q, opts);
        write_cost_row(costs, run.cost);
        const auto name = to_string(s);
        std::string lower(name.size(), ' ');
        std::transform(name.begin(), name.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
        write_answers(dir, "answers_" + lower + ".txt", run.result, g);
        if (run.cost.expensive_multi_source) {
            std::cerr << "warning: bottom-up multi-source evaluation searches from every node\n";
        }
        if (run.cost.truncated) std::cerr << "warning: budget reached; answers are partial\n";
        records.emplace(s, run.cost);
    }
    auto ledger = open_output(dir, "ledger.csv");
    net.ledger().write_csv(ledger);

    std::cout << "peers=" << net.peer_count() << " links=" << net.topology().link_count()
              << " d=" << to_string(net.topology().average_degree()) << " k=" << to_string(net.replication_rate())
              << '\n';
    for (const auto& [s, r] : records) {
        std::cout << to_string(s) << ": answers=" << r.answer_count << " broadcast_symbols=" << r.measured_broadcast_symbols
                  << " unicast_symbols=" << r.measured_unicast_symbols << '\n';
    }
    if (f.compare) {
        const auto params = params_of(net);
        const auto inputs = inputs_from_records(records.at(Strategy::s1), records.at(Strategy::s2));
        std::ostringstream report;
        try {
            write_report(report, params, inputs);
        } catch (const ConfigError& e) {
            std::cerr << "warning: no verdict: " << e.what() << '\n';
            return kOk;
        }
        std::cout << report.str();
        auto verdict = open_output(dir, "verdict.txt");
        verdict << report.str();
    }
    return kOk;
}

// ---- decide --------------------------------------------------------------------

struct DecideFlags {
    std::int64_t peers = 0;
    std::string degree;
    std::string replication;
    std::optional<std::int64_t> q_lbl, d_s1, q_bc, d_s2;
    std::optional<std::int64_t> high_q_bc, high_d_s2;
    double probability = 1.0;
    std::string costs;
};

/// Fills missing cost factors from a costs.csv written by `simulate --compare`.
void read_costs(const std::string& path, DecideFlags& f) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    std::getline(in, line);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (cells.size() < 5) throw ParseError(path + ": line " + std::to_string(line_no) + ": too few columns", line_no);
        const auto num = [&](std::size_t i) -> std::optional<std::int64_t> {
            if (cells[i].empty()) return std::nullopt;
            try {
                return std::stoll(cells[i]);
            } catch (const std::exception&) {
                throw ParseError(path + ": line " + std::to_string(line_no) + ": bad number", line_no);
            }
        };
        if (cells[0] == "S1") {
            if (!f.q_lbl) f.q_lbl = num(1);
            if (!f.d_s1) f.d_s1 = num(2);
        } else if (cells[0] == "S2") {
            if (!f.q_bc) f.q_bc = num(3);
            if (!f.d_s2) f.d_s2 = num(4);
        }
    }
}

int cmd_decide(DecideFlags f) {
    if (!f.costs.empty()) read_costs(f.costs, f);
    if (!f.q_lbl || !f.d_s1 || !f.q_bc || !f.d_s2) {
        throw ConfigError("all of --q-lbl, --d-s1, --q-bc and --d-s2 are required (or --costs)");
    }
    const NetworkParams p{f.peers, parse_rational(f.degree), parse_rational(f.replication)};
    const CostInputs low{*f.q_lbl, *f.d_s1, *f.q_bc, *f.d_s2};
    if (f.high_q_bc.has_value() != f.high_d_s2.has_value()) {
        throw ConfigError("--high-q-bc and --high-d-s2 go together");
    }
    if (!f.high_q_bc) {
        write_report(std::cout, p, low);
        return kOk;
    }
    const CostInputs high{*f.q_lbl, *f.d_s1, *f.high_q_bc, *f.high_d_s2};
    write_recommendation(std::cout, p, recommend(p, low, high, f.probability));
    return kOk;
}

// ---- estimate ------------------------------------------------------------------

struct EstimateFlags {
    std::string sample;
    std::string expr;
    std::string model = "gilbert";
    std::size_t runs = 1000;
    std::size_t budget = 10000;
    std::optional<std::uint64_t> nodes;
    std::optional<std::uint64_t> edges;
    bool nonzero_only = false;
    unsigned threads = 1;
};

int cmd_estimate(const Common& common, const EstimateFlags& f) {
    if (f.runs < 1) throw ConfigError("--runs must be at least 1");
    const auto sample = load_graph(f.sample);
    if (sample.edge_count() == 0) throw ConfigError("the sample graph has no edges");
    const auto q = Query::multi_source(parse_regex(f.expr, classes_of(common)));
    const auto nodes = f.nodes.value_or(sample.node_count());
    const auto edges = f.edges.value_or(sample.edge_count());

    CostDistribution dist;
    if (f.model == "gilbert") {
        dist = monte_carlo(fit_gilbert(sample, nodes, edges), q.automaton, f.runs, common.seed, f.budget, f.threads);
    } else if (f.model == "bayes") {
        dist = monte_carlo(fit_bayes(sample, nodes), q.automaton, f.runs, common.seed, f.budget, f.threads);
    } else {
        dist = exact_cost_distribution(sample, q.automaton, f.budget);
    }

    for (const auto field : {CostField::d_s2, CostField::q_bc, CostField::edges}) {
        auto out = open_output(common.output_dir, "ccdf_" + to_string(field) + ".csv");
        write_ccdf_csv(out, ccdf(dist, field, f.nonzero_only));
    }
    const auto stats = label_stats(sample);
    std::cout << "model=" << f.model << " runs=" << dist.samples.size() << " seed=" << common.seed << '\n';
    std::cout << "zero_cost_fraction=" << zero_cost_fraction(dist) << " truncated_fraction=" << truncated_fraction(dist)
              << '\n';
    for (const double level : {0.5, 0.9}) {
        std::cout << "q" << static_cast<int>(level * 100) << ": d_s2=" << quantile(dist, CostField::d_s2, level, f.nonzero_only)
                  << " q_bc=" << quantile(dist, CostField::q_bc, level, f.nonzero_only) << '\n';
    }
    std::cout << "q_lbl=" << q.label_count() << " d_s1_estimate=" << estimate_ds1(q, stats, static_cast<double>(edges))
              << '\n';
    return kOk;
}

// ---- netstats / stats ----------------------------------------------------------

struct NetstatsFlags {
    std::string graph;
    std::optional<std::uint32_t> probes;
    NetworkFlags network;
};

int cmd_netstats(const Common& common, const NetstatsFlags& f) {
    const auto g = load_graph(f.graph);
    PeerNetwork net(g, network_config(f.network, common.seed));
    const auto probes = f.probes.value_or(static_cast<std::uint32_t>(std::min<std::size_t>(g.edge_count(), 100)));
    const auto est = estimate_network_params(net, probes, derive_seed(common.seed, 2));
    std::cout << "quantity,estimate,actual\n";
    std::cout << "peers," << est.peers << ',' << net.peer_count() << '\n';
    std::cout << "links," << est.links << ',' << net.topology().link_count() << '\n';
    std::cout << "d," << to_string(est.degree) << ',' << to_string(net.topology().average_degree()) << '\n';
    std::cout << "k," << to_string(est.replication) << ',' << to_string(net.replication_rate()) << '\n';
    std::cout << "edges," << to_string(est.edges) << ',' << g.edge_count() << '\n';
    auto ledger = open_output(common.output_dir, "ledger.csv");
    net.ledger().write_csv(ledger);
    return kOk;
}

struct StatsFlags {
    std::string graph;
    std::optional<std::string> expr;
};

int cmd_stats(const Common& common, const StatsFlags& f) {
    const auto g = load_graph(f.graph);
    const auto stats = label_stats(g);
    std::cout << "nodes=" << stats.node_count << " edges=" << stats.edge_count << " labels=" << stats.counts.size() << '\n';
    std::cout << "label,count\n";
    for (const auto& [label, count] : stats.counts) std::cout << label << ',' << count << '\n';
    if (f.expr) {
        const auto q = make_query(*f.expr, std::nullopt, classes_of(common));
        const auto valid = valid_start_nodes(g, q);
        std::cout << "q_lbl=" << q.label_count() << " valid_starts=" << valid.size();
        if (g.node_count() != 0) {
            std::cout << " valid_fraction=" << static_cast<double>(valid.size()) / static_cast<double>(g.node_count());
        }
        std::cout << '\n';
    }
    return kOk;
}

int report(const char* kind, const std::exception& e, int code) {
    std::cerr << "rpq: " << kind << ": " << e.what() << '\n';
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regular path queries over replicated, non-localized graph data"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "rpq 1.0");
    app.set_config("--config", "", "INI/TOML file with flag defaults; use a [simulate] section and so on");

    Common common;

    QueryFlags qf;
    auto* query = app.add_subcommand("query", "Evaluate a query on a local graph");
    add_common_flags(query, common);
    query->add_option("-g,--graph", qf.graph, "Graph TSV file")->required();
    query->add_option("-e,--expr", qf.expr, "Regular expression")->required();
    query->add_option("-s,--start", qf.start, "Start node (single-source); omit for multi-source");
    query->add_option("--budget", qf.budget, "Stop after this many traversed edges");
    query->add_flag("--witness", qf.witness, "Print one witness path per answer");

    SimulateFlags sf;
    auto* simulate = app.add_subcommand("simulate", "Run a retrieval strategy over a simulated peer network");
    add_common_flags(simulate, common);
    add_network_flags(simulate, sf.network);
    simulate->add_option("-g,--graph", sf.graph, "Graph TSV file")->required();
    simulate->add_option("-e,--expr", sf.expr, "Regular expression")->required();
    simulate->add_option("-s,--start", sf.start, "Start node (single-source)");
    simulate->add_option("--strategy", sf.strategy, "s1 (top-down) or s2 (bottom-up)")
        ->check(CLI::IsMember({"s1", "s2"}))
        ->capture_default_str();
    simulate->add_flag("--compare", sf.compare, "Run both strategies on the same placement");
    simulate->add_option("--budget", sf.budget, "S2: stop after this many traversed edges");
    simulate->add_flag("--allow-full-retrieval", sf.allow_full, "S1: accept wildcard queries");

    DecideFlags df;
    auto* decide = app.add_subcommand("decide", "Compare strategy costs for given network and query parameters");
    decide->add_option("--peers", df.peers, "N_p")->required()->check(CLI::PositiveNumber);
    decide->add_option("--degree", df.degree, "d = N_c / N_p")->required();
    decide->add_option("--replication", df.replication, "k")->required();
    decide->add_option("--q-lbl", df.q_lbl, "Labels broadcast by S1");
    decide->add_option("--d-s1", df.d_s1, "Symbols retrieved by S1");
    decide->add_option("--q-bc", df.q_bc, "Symbols broadcast by S2 (likely case)");
    decide->add_option("--d-s2", df.d_s2, "Symbols retrieved by S2 (likely case)");
    decide->add_option("--high-q-bc", df.high_q_bc, "Symbols broadcast by S2 (unlikely case)");
    decide->add_option("--high-d-s2", df.high_d_s2, "Symbols retrieved by S2 (unlikely case)");
    decide->add_option("--probability", df.probability, "Probability of the likely case")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    decide->add_option("--costs", df.costs, "costs.csv from simulate --compare");

    EstimateFlags ef;
    auto* estimate = app.add_subcommand("estimate", "Monte-Carlo cost distribution from a graph model");
    add_common_flags(estimate, common);
    estimate->add_option("--sample", ef.sample, "Sample graph TSV file")->required();
    estimate->add_option("-e,--expr", ef.expr, "Regular expression")->required();
    estimate->add_option("--model", ef.model, "gilbert | bayes | exact")
        ->check(CLI::IsMember({"gilbert", "bayes", "exact"}))
        ->capture_default_str();
    estimate->add_option("--runs", ef.runs, "Monte-Carlo runs")->capture_default_str();
    estimate->add_option("--budget", ef.budget, "Product states per run")->capture_default_str();
    estimate->add_option("--nodes", ef.nodes, "Estimated node count of the full graph");
    estimate->add_option("--edges", ef.edges, "Estimated edge count of the full graph");
    estimate->add_flag("--nonzero-only", ef.nonzero_only, "Drop zero-cost runs from the CCDF");
    estimate->add_option("--threads", ef.threads, "Worker threads")->capture_default_str();

    NetstatsFlags nf;
    auto* netstats = app.add_subcommand("netstats", "Estimate N_p, N_c, d, k and |E| by probing the network");
    add_common_flags(netstats, common);
    add_network_flags(netstats, nf.network);
    netstats->add_option("-g,--graph", nf.graph, "Graph TSV file")->required();
    netstats->add_option("--probes", nf.probes, "Resource probes (default min(|E|, 100))");

    StatsFlags tf;
    auto* stats = app.add_subcommand("stats", "Label counts and valid start nodes");
    add_common_flags(stats, common);
    stats->add_option("-g,--graph", tf.graph, "Graph TSV file")->required();
    stats->add_option("-e,--expr", tf.expr, "Expression to count valid start nodes for");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*query) return cmd_query(common, qf);
        if (*simulate) return cmd_simulate(common, sf);
        if (*decide) return cmd_decide(df);
        if (*estimate) return cmd_estimate(common, ef);
        if (*netstats) return cmd_netstats(common, nf);
        if (*stats) return cmd_stats(common, tf);
    } catch (const ParseError& e) {
        return report("parse error", e, kParse);
    } catch (const IoError& e) {
        return report("i/o error", e, kIo);
    } catch (const ConfigError& e) {
        return report("configuration error", e, kConfig);
    } catch (const RefusalError& e) {
        return report("refused", e, kRefusal);
    } catch (const std::exception& e) {
        return report("error", e, kOther);
    }
    return kOther;
}
