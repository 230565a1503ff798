#include "rpq/netsim.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <set>

#include "rpq/error.hpp"

namespace rpq {

namespace {

constexpr int kTopologyAttempts = 200;

std::vector<std::vector<PeerId>> adjacency_of(std::uint32_t peers, const std::vector<std::pair<PeerId, PeerId>>& links) {
    std::vector<std::vector<PeerId>> adj(peers);
    for (const auto& [a, b] : links) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    return adj;
}

/// Steger-Wormald style pairing: repeatedly join two random free stubs that
/// form a new simple link. Returns false when it gets stuck.
bool try_regular(std::uint32_t peers, std::uint32_t degree, SplitMix64& rng,
                 std::vector<std::pair<PeerId, PeerId>>& links) {
    std::vector<PeerId> stubs;
    stubs.reserve(static_cast<std::size_t>(peers) * degree);
    for (PeerId p = 0; p < peers; ++p) stubs.insert(stubs.end(), degree, p);
    std::set<std::pair<PeerId, PeerId>> chosen;
    while (!stubs.empty()) {
        bool joined = false;
        for (int attempt = 0; attempt < 100 && !joined; ++attempt) {
            const auto i = static_cast<std::size_t>(uniform_below(rng, stubs.size()));
            const auto j = static_cast<std::size_t>(uniform_below(rng, stubs.size()));
            const auto a = std::min(stubs[i], stubs[j]);
            const auto b = std::max(stubs[i], stubs[j]);
            if (i == j || a == b || chosen.count({a, b}) != 0) continue;
            chosen.insert({a, b});
            // Remove the higher index first so the lower stays valid.
            for (const auto k : {std::max(i, j), std::min(i, j)}) {
                stubs[k] = stubs.back();
                stubs.pop_back();
            }
            joined = true;
        }
        if (!joined) return false;
    }
    links.assign(chosen.begin(), chosen.end());
    return true;
}

} // namespace

Topology::Topology(Kind kind, std::uint32_t peers, std::vector<std::pair<PeerId, PeerId>> links)
    : kind_(kind), links_(std::move(links)) {
    for (auto& [a, b] : links_) {
        if (a >= peers || b >= peers || a == b) throw ConfigError("invalid topology link");
        if (a > b) std::swap(a, b);
    }
    std::sort(links_.begin(), links_.end());
    if (std::adjacent_find(links_.begin(), links_.end()) != links_.end()) throw ConfigError("duplicate topology link");
    adjacency_ = adjacency_of(peers, links_);
}

bool Topology::connected() const {
    if (adjacency_.empty()) return true;
    std::vector<char> seen(adjacency_.size(), 0);
    std::vector<PeerId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const auto p = stack.back();
        stack.pop_back();
        for (const auto q : adjacency_[p]) {
            if (!seen[q]) {
                seen[q] = 1;
                ++count;
                stack.push_back(q);
            }
        }
    }
    return count == adjacency_.size();
}

Topology Topology::random_regular(std::uint32_t peers, std::uint32_t degree, SplitMix64& rng) {
    if (peers < 2) throw ConfigError("a network needs at least 2 peers");
    if (degree == 0 || degree >= peers) {
        throw ConfigError("random-regular degree must be in [1, peers-1], got " + std::to_string(degree));
    }
    if ((static_cast<std::uint64_t>(peers) * degree) % 2 != 0) {
        throw ConfigError("random-regular topology needs peers*degree even");
    }
    if (degree == 1 && peers > 2) throw ConfigError("a 1-regular topology with more than 2 peers is disconnected");
    for (int attempt = 0; attempt < kTopologyAttempts; ++attempt) {
        std::vector<std::pair<PeerId, PeerId>> links;
        if (!try_regular(peers, degree, rng, links)) continue;
        Topology t(Kind::random_regular, peers, std::move(links));
        if (t.connected()) return t;
    }
    throw ConfigError("could not generate a connected random-regular topology");
}

Topology Topology::erdos_renyi(std::uint32_t peers, double p, SplitMix64& rng) {
    if (peers < 2) throw ConfigError("a network needs at least 2 peers");
    if (!(p > 0.0 && p <= 1.0)) throw ConfigError("link probability must be in (0, 1]");
    for (int attempt = 0; attempt < kTopologyAttempts; ++attempt) {
        std::vector<std::pair<PeerId, PeerId>> links;
        for (PeerId a = 0; a < peers; ++a) {
            for (PeerId b = a + 1; b < peers; ++b) {
                if (uniform_unit(rng) < p) links.emplace_back(a, b);
            }
        }
        Topology t(Kind::erdos_renyi, peers, std::move(links));
        if (t.connected()) return t;
    }
    throw ConfigError("could not generate a connected Erdos-Renyi topology; raise the link probability");
}

Topology Topology::star(std::uint32_t peers) {
    if (peers < 2) throw ConfigError("a network needs at least 2 peers");
    std::vector<std::pair<PeerId, PeerId>> links;
    for (PeerId p = 1; p < peers; ++p) links.emplace_back(0, p);
    return Topology(Kind::star, peers, std::move(links));
}

Topology Topology::from_links(std::uint32_t peers, std::vector<std::pair<PeerId, PeerId>> links) {
    if (peers < 2) throw ConfigError("a network needs at least 2 peers");
    Topology t(Kind::explicit_links, peers, std::move(links));
    if (!t.connected()) throw ConfigError("topology is not connected");
    return t;
}

Topology make_topology(std::uint32_t peers, const TopologySpec& spec, SplitMix64& rng) {
    switch (spec.kind) {
    case Topology::Kind::random_regular:
        return Topology::random_regular(peers, spec.degree, rng);
    case Topology::Kind::erdos_renyi:
        return Topology::erdos_renyi(peers, spec.probability, rng);
    case Topology::Kind::star:
        return Topology::star(peers);
    case Topology::Kind::explicit_links:
        break;
    }
    throw ConfigError("explicit topologies must be built with Topology::from_links");
}

std::uint64_t size_in_symbols(const BroadcastQuery& query) {
    struct Visitor {
        std::uint64_t operator()(const ByLabels& q) const { return q.all_labels ? 1 : q.labels.size(); }
        std::uint64_t operator()(const NeighborLookup& q) const { return 1 + q.wanted.size(); }
        std::uint64_t operator()(const Ping&) const { return 1; }
        std::uint64_t operator()(const DegreeCount&) const { return 1; }
        std::uint64_t operator()(const ResourceProbe&) const { return 3; }
        std::uint64_t operator()(const EdgeCount&) const { return 1; }
    };
    return std::visit(Visitor{}, query);
}

LedgerRow& LedgerRow::operator+=(const LedgerRow& other) {
    broadcast_symbols += other.broadcast_symbols;
    unicast_symbols += other.unicast_symbols;
    broadcast_messages += other.broadcast_messages;
    unicast_messages += other.unicast_messages;
    broadcasts += other.broadcasts;
    broadcast_payload += other.broadcast_payload;
    return *this;
}

void Ledger::begin_phase(std::string name) {
    LedgerRow row;
    row.phase = std::move(name);
    rows_.push_back(std::move(row));
}

LedgerRow& Ledger::current() {
    if (rows_.empty()) begin_phase("default");
    return rows_.back();
}

void Ledger::record_broadcast(std::uint64_t payload, std::uint64_t messages) {
    auto& row = current();
    ++row.broadcasts;
    row.broadcast_payload += payload;
    row.broadcast_messages += messages;
    row.broadcast_symbols += payload * messages;
}

void Ledger::record_unicast(std::uint64_t symbols) {
    auto& row = current();
    ++row.unicast_messages;
    row.unicast_symbols += symbols;
}

LedgerRow Ledger::totals() const {
    LedgerRow total;
    total.phase = "total";
    for (const auto& row : rows_) total += row;
    return total;
}

void Ledger::write_csv(std::ostream& out) const {
    out << "phase,broadcast_symbols,unicast_symbols,broadcast_msgs,unicast_msgs\n";
    const auto emit = [&](const LedgerRow& r) {
        out << r.phase << ',' << r.broadcast_symbols << ',' << r.unicast_symbols << ',' << r.broadcast_messages << ','
            << r.unicast_messages << '\n';
    };
    for (const auto& row : rows_) emit(row);
    emit(totals());
}

PeerNetwork::PeerNetwork(const LabeledGraph& graph, const NetworkConfig& config)
    : graph_(&graph), config_(config), topology_(Topology::star(2)) {
    if (config.peers < 2) throw ConfigError("a network needs at least 2 peers");
    const auto& k = config.replication;
    if (k <= Rational(0) || k > Rational(1)) throw ConfigError("replication rate must be in (0, 1], got " + to_string(k));
    const Rational factor = k * static_cast<std::int64_t>(config.peers);
    if (factor < Rational(1)) {
        throw ConfigError("replication factor k*N_p = " + to_string(factor) + " is below one copy per edge");
    }
    if (config.client_peer >= config.peers) throw ConfigError("client peer out of range");

    SplitMix64 topology_rng(derive_seed(config.seed, 0));
    topology_ = make_topology(config.peers, config.topology, topology_rng);

    // Exact K copies when k*N_p is an integer; otherwise floor or ceil with
    // the fractional part as probability, so the mean stays k*N_p.
    SplitMix64 placement_rng(derive_seed(config.seed, 1));
    const auto whole = static_cast<std::uint32_t>(factor.numerator() / factor.denominator());
    const Rational fraction = factor - static_cast<std::int64_t>(whole);
    placement_.resize(graph.edge_count());
    stores_.resize(config.peers);
    for (std::uint32_t e = 0; e < graph.edge_count(); ++e) {
        auto copies = whole;
        if (fraction.numerator() != 0 && uniform_below(placement_rng, static_cast<std::uint64_t>(fraction.denominator())) <
                                 static_cast<std::uint64_t>(fraction.numerator())) {
            ++copies;
        }
        auto peers = sample_distinct(placement_rng, config.peers, copies);
        std::sort(peers.begin(), peers.end());
        const auto& t = graph.edges()[e];
        for (const auto p : peers) {
            stores_[p].edges.push_back(e);
            stores_[p].out[t.src].push_back(e);
            stores_[p].in[t.dst].push_back(e);
        }
        placement_[e] = std::move(peers);
    }
}

std::optional<std::uint32_t> PeerNetwork::exact_replication() const {
    if (placement_.empty()) return std::nullopt;
    const auto k = placement_.front().size();
    for (const auto& p : placement_) {
        if (p.size() != k) return std::nullopt;
    }
    return static_cast<std::uint32_t>(k);
}

Rational PeerNetwork::replication_rate() const {
    if (placement_.empty()) return config_.replication;
    std::int64_t copies = 0;
    for (const auto& p : placement_) copies += static_cast<std::int64_t>(p.size());
    return Rational(copies, static_cast<std::int64_t>(placement_.size()) * peer_count());
}

std::uint64_t PeerNetwork::flood(std::uint64_t& reached) const {
    // Every peer forwards to all its neighbours except the sender, on first
    // receipt only. Messages are delivered in FIFO order.
    struct Message {
        PeerId from;
        PeerId to;
    };
    const auto origin = config_.client_peer;
    std::vector<char> seen(peer_count(), 0);
    seen[origin] = 1;
    reached = 1;
    std::uint64_t messages = 0;
    std::deque<Message> in_flight;
    for (const auto q : topology_.neighbors(origin)) in_flight.push_back({origin, q});
    while (!in_flight.empty()) {
        const auto m = in_flight.front();
        in_flight.pop_front();
        ++messages;
        if (seen[m.to]) continue;
        seen[m.to] = 1;
        ++reached;
        for (const auto q : topology_.neighbors(m.to)) {
            if (q != m.from) in_flight.push_back({m.to, q});
        }
    }
    return messages;
}

Response PeerNetwork::answer(PeerId peer, const BroadcastQuery& query) const {
    const auto& store = stores_[peer];
    Response r;
    r.peer = peer;
    const auto& g = *graph_;
    if (const auto* q = std::get_if<ByLabels>(&query)) {
        for (const auto e : store.edges) {
            if (q->all_labels || q->labels.count(g.label_name(g.edges()[e].label)) != 0) r.edges.push_back(e);
        }
        r.symbols = 3 * r.edges.size();
    } else if (const auto* q = std::get_if<NeighborLookup>(&query)) {
        const auto collect = [&](const auto& index, Direction direction) {
            const auto it = index.find(q->node.value);
            if (it == index.end()) return;
            for (const auto e : it->second) {
                const auto& t = g.edges()[e];
                const Label label{g.label_name(t.label), direction};
                const bool match = std::any_of(q->wanted.begin(), q->wanted.end(),
                                               [&](const Symbol& s) { return s.matches(label); });
                if (match) r.steps.push_back({label, NodeId{direction == Direction::forward ? t.dst : t.src}});
            }
        };
        collect(store.out, Direction::forward);
        collect(store.in, Direction::inverse);
        std::sort(r.steps.begin(), r.steps.end());
        r.symbols = 3 * r.steps.size();
    } else if (std::holds_alternative<Ping>(query)) {
        r.symbols = 1;
    } else if (std::holds_alternative<DegreeCount>(query)) {
        r.value = topology_.degree(peer);
        r.symbols = 1;
    } else if (const auto* q = std::get_if<ResourceProbe>(&query)) {
        if (std::binary_search(store.edges.begin(), store.edges.end(), q->edge)) r.symbols = 1;
    } else if (std::holds_alternative<EdgeCount>(query)) {
        r.value = store.edges.size();
        r.symbols = 1;
    }
    return r;
}

BroadcastOutcome PeerNetwork::broadcast(const BroadcastQuery& query) {
    BroadcastOutcome outcome;
    outcome.messages = flood(outcome.peers_reached);
    ledger_.record_broadcast(size_in_symbols(query), outcome.messages);
    for (PeerId p = 0; p < peer_count(); ++p) {
        auto r = answer(p, query);
        // Peers with nothing to report stay silent.
        if (r.symbols == 0) continue;
        ledger_.record_unicast(r.symbols);
        outcome.responses.push_back(std::move(r));
    }
    return outcome;
}

NetworkEstimate estimate_network_params(PeerNetwork& network, std::uint32_t probe_sample, std::uint64_t seed) {
    const auto edge_total = network.graph().edge_count();
    if (probe_sample < 1 || probe_sample > edge_total) {
        throw ConfigError("probe sample must be in [1, |E|] = [1, " + std::to_string(edge_total) + "]");
    }
    network.ledger().begin_phase("estimate");
    NetworkEstimate est;
    est.peers = network.broadcast(Ping{}).responses.size();

    std::uint64_t degree_sum = 0;
    for (const auto& r : network.broadcast(DegreeCount{}).responses) degree_sum += r.value;
    est.links = degree_sum / 2;
    est.degree = Rational(static_cast<std::int64_t>(est.links), static_cast<std::int64_t>(est.peers));

    SplitMix64 rng(seed);
    std::uint64_t hits = 0;
    for (const auto e : sample_distinct(rng, static_cast<std::uint32_t>(edge_total), probe_sample)) {
        hits += network.broadcast(ResourceProbe{e}).responses.size();
    }
    const Rational factor(static_cast<std::int64_t>(hits), static_cast<std::int64_t>(probe_sample));
    est.replication = factor / static_cast<std::int64_t>(est.peers);

    std::uint64_t stored = 0;
    for (const auto& r : network.broadcast(EdgeCount{}).responses) stored += r.value;
    est.edges = Rational(static_cast<std::int64_t>(stored)) / factor;
    return est;
}

} // namespace rpq
