#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "rpq/automaton.hpp"
#include "rpq/engine.hpp"
#include "rpq/netsim.hpp"

namespace rpq {

enum class Strategy { s1, s2 };

std::string to_string(Strategy s);

/// Symbol counts of one strategy run. The four cost factors are exact
/// counts; `measured_*` are what the simulator's ledger charged.
struct CostRecord {
    Strategy strategy = Strategy::s1;
    std::optional<std::uint64_t> q_lbl;  // S1: labels broadcast
    std::optional<std::uint64_t> d_s1;   // S1: 3 x distinct matching edges
    std::optional<std::uint64_t> q_bc;   // S2: summed sizes of distinct lookups
    std::optional<std::uint64_t> d_s2;   // S2: 3 x edges per distinct lookup answer

    std::uint64_t measured_broadcast_symbols = 0;
    std::uint64_t measured_unicast_symbols = 0;
    std::uint64_t distinct_broadcasts = 0;
    std::uint64_t broadcast_messages = 0;
    std::uint64_t unicast_messages = 0;
    std::uint64_t retrieved_edges = 0;   // distinct edges downloaded
    std::size_t answer_count = 0;
    bool truncated = false;
    /// Multi-source run under S2: one search per node of the universe.
    bool expensive_multi_source = false;
};

void write_cost_header(std::ostream& out);
void write_cost_row(std::ostream& out, const CostRecord& record);

struct StrategyOptions {
    /// S1 only: permit a wildcard query, which downloads every edge.
    bool allow_full_retrieval = false;
    /// S2 only: stop after this many traversed edges (answers become partial).
    std::optional<std::size_t> budget;
    bool witness = false;
};

struct StrategyRun {
    QueryResult result;
    CostRecord cost;
};

/// Top-down: one broadcast of the query's labels, then local evaluation over
/// the deduplicated download. Throws RefusalError for a wildcard query unless
/// `allow_full_retrieval` is set.
StrategyRun run_s1(PeerNetwork& network, const Query& query, const StrategyOptions& options = {});

/// Bottom-up: local product search whose every neighbour lookup is a
/// broadcast, with repeats served from a cache.
StrategyRun run_s2(PeerNetwork& network, const Query& query, const StrategyOptions& options = {});

StrategyRun run_strategy(Strategy strategy, PeerNetwork& network, const Query& query,
                         const StrategyOptions& options = {});

} // namespace rpq
