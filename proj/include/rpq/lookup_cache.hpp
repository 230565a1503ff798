#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "rpq/engine.hpp"

namespace rpq {

/// Bottom-up retrieval accounting around any EdgeSource.
///
/// Each distinct (node, wanted symbols) request reaches the inner source once
/// and is charged 1 + |wanted| broadcast symbols; its answer is charged 3
/// symbols per returned edge. Repeats are served from the cache for free.
class CachedLookupSource final : public EdgeSource {
public:
    explicit CachedLookupSource(EdgeSource& inner) : inner_(inner) {}

    std::vector<Neighbor> neighbors(NodeId v, const SymbolSet& wanted) override;
    std::vector<NodeId> all_nodes() override { return inner_.all_nodes(); }

    /// Q_bc: summed sizes of the distinct lookups.
    std::uint64_t broadcast_symbols() const noexcept { return broadcast_symbols_; }
    /// D_s2: 3 symbols per edge in each distinct lookup's answer.
    std::uint64_t retrieved_symbols() const noexcept { return retrieved_symbols_; }
    std::uint64_t lookups() const noexcept { return cache_.size(); }
    /// Extended edges returned by any lookup, each once.
    const std::set<ExtendedEdge>& retrieved_edges() const noexcept { return retrieved_edges_; }

private:
    EdgeSource& inner_;
    std::map<std::pair<NodeId, SymbolSet>, std::vector<Neighbor>> cache_;
    std::uint64_t broadcast_symbols_ = 0;
    std::uint64_t retrieved_symbols_ = 0;
    std::set<ExtendedEdge> retrieved_edges_;
};

} // namespace rpq
