#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "rpq/graph.hpp"
#include "rpq/random.hpp"
#include "rpq/rational.hpp"

namespace rpq {

using PeerId = std::uint32_t;

/// Undirected, connected overlay network between peers.
class Topology {
public:
    enum class Kind { random_regular, erdos_renyi, star, explicit_links };

    /// Every peer has exactly `degree` links. Needs degree < peers and
    /// peers*degree even.
    static Topology random_regular(std::uint32_t peers, std::uint32_t degree, SplitMix64& rng);
    /// Each pair linked with probability `p`, redrawn until connected.
    static Topology erdos_renyi(std::uint32_t peers, double p, SplitMix64& rng);
    /// Peer 0 is the hub.
    static Topology star(std::uint32_t peers);
    static Topology from_links(std::uint32_t peers, std::vector<std::pair<PeerId, PeerId>> links);

    Kind kind() const noexcept { return kind_; }
    std::uint32_t peer_count() const noexcept { return static_cast<std::uint32_t>(adjacency_.size()); }
    /// N_c, the number of undirected links.
    std::uint64_t link_count() const noexcept { return links_.size(); }
    const std::vector<std::pair<PeerId, PeerId>>& links() const noexcept { return links_; }
    const std::vector<PeerId>& neighbors(PeerId p) const { return adjacency_.at(p); }
    std::size_t degree(PeerId p) const { return adjacency_.at(p).size(); }

    /// d = N_c / N_p, the average outgoing degree in the cost formulas (half
    /// the mean undirected degree).
    Rational average_degree() const {
        return Rational(static_cast<std::int64_t>(link_count()), static_cast<std::int64_t>(peer_count()));
    }

    bool connected() const;

private:
    Topology(Kind kind, std::uint32_t peers, std::vector<std::pair<PeerId, PeerId>> links);

    Kind kind_;
    std::vector<std::pair<PeerId, PeerId>> links_; // (a, b) with a < b, sorted
    std::vector<std::vector<PeerId>> adjacency_;   // sorted
};

struct TopologySpec {
    Topology::Kind kind = Topology::Kind::random_regular;
    std::uint32_t degree = 3;   // random_regular
    double probability = 0.1;   // erdos_renyi
};

struct NetworkConfig {
    std::uint32_t peers = 10;
    TopologySpec topology;
    Rational replication{1, 5}; // k
    std::uint64_t seed = 1;
    PeerId client_peer = 0;     // where the querying client is attached
};

/// Query flooded to every peer. Sizes are in symbols (labels or node ids).
struct ByLabels {
    std::set<std::string> labels;
    bool all_labels = false; // wildcard: every edge matches
};
struct NeighborLookup {
    NodeId node;
    SymbolSet wanted;
};
struct Ping {};
struct DegreeCount {};
struct ResourceProbe {
    std::uint32_t edge; // index into graph.edges()
};
struct EdgeCount {};

using BroadcastQuery = std::variant<ByLabels, NeighborLookup, Ping, DegreeCount, ResourceProbe, EdgeCount>;

std::uint64_t size_in_symbols(const BroadcastQuery& query);

/// One unicast message from a peer back to the client.
struct Response {
    PeerId peer = 0;
    std::vector<std::uint32_t> edges; // ByLabels: matching stored edges
    std::vector<Neighbor> steps;      // NeighborLookup: matching extended steps
    std::uint64_t value = 0;          // DegreeCount / EdgeCount
    std::uint64_t symbols = 0;
};

struct BroadcastOutcome {
    std::vector<Response> responses;
    std::uint64_t messages = 0;
    std::uint64_t peers_reached = 0;
};

struct LedgerRow {
    std::string phase;
    std::uint64_t broadcast_symbols = 0;  // symbols carried by all flood messages
    std::uint64_t unicast_symbols = 0;
    std::uint64_t broadcast_messages = 0;
    std::uint64_t unicast_messages = 0;
    std::uint64_t broadcasts = 0;
    std::uint64_t broadcast_payload = 0;  // sum of query sizes, one per broadcast

    LedgerRow& operator+=(const LedgerRow& other);
};

/// Message-cost ledger, one row per phase. Counters only grow.
class Ledger {
public:
    void begin_phase(std::string name);
    void record_broadcast(std::uint64_t payload, std::uint64_t messages);
    void record_unicast(std::uint64_t symbols);

    const std::vector<LedgerRow>& rows() const noexcept { return rows_; }
    LedgerRow totals() const;

    /// `phase,broadcast_symbols,unicast_symbols,broadcast_msgs,unicast_msgs`
    void write_csv(std::ostream& out) const;

private:
    LedgerRow& current();
    std::vector<LedgerRow> rows_;
};

/// A data graph whose edges are replicated over the peers of a topology.
class PeerNetwork {
public:
    /// Throws ConfigError for out-of-domain parameters.
    PeerNetwork(const LabeledGraph& graph, const NetworkConfig& config);

    const LabeledGraph& graph() const noexcept { return *graph_; }
    const Topology& topology() const noexcept { return topology_; }
    const NetworkConfig& config() const noexcept { return config_; }
    std::uint32_t peer_count() const noexcept { return topology_.peer_count(); }

    /// Peers holding `edge` (index into graph.edges()), sorted.
    const std::vector<PeerId>& replicas(std::uint32_t edge) const { return placement_.at(edge); }
    /// Replication factor K when every edge has the same replica count.
    std::optional<std::uint32_t> exact_replication() const;
    /// Measured mean replicas per edge divided by N_p.
    Rational replication_rate() const;

    /// Floods `query` from the client's peer and collects unicast responses,
    /// charging the ledger.
    BroadcastOutcome broadcast(const BroadcastQuery& query);

    Ledger& ledger() noexcept { return ledger_; }
    const Ledger& ledger() const noexcept { return ledger_; }

private:
    struct PeerStore {
        std::vector<std::uint32_t> edges; // sorted
        std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> out; // node -> edges
        std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> in;
    };

    std::uint64_t flood(std::uint64_t& reached) const;
    Response answer(PeerId peer, const BroadcastQuery& query) const;

    const LabeledGraph* graph_;
    NetworkConfig config_;
    Topology topology_;
    std::vector<std::vector<PeerId>> placement_;
    std::vector<PeerStore> stores_;
    Ledger ledger_;
};

/// Builds the topology from `spec` (seeded) without placing data.
Topology make_topology(std::uint32_t peers, const TopologySpec& spec, SplitMix64& rng);

struct NetworkEstimate {
    std::uint64_t peers = 0;       // N_p, from a ping
    std::uint64_t links = 0;       // N_c, half the summed degree reports
    Rational replication;          // k, mean probe responses / N_p
    Rational degree;               // d = N_c / N_p
    Rational edges;                // |E|, summed stored-edge counts / K
};

/// Probes the network with a ping, a degree count, `probe_sample` resource
/// probes on distinct random edges and an edge count. Charged to the ledger
/// under phase "estimate". Requires 1 <= probe_sample <= |E|.
NetworkEstimate estimate_network_params(PeerNetwork& network, std::uint32_t probe_sample, std::uint64_t seed);

} // namespace rpq
