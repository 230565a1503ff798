#include "rpq/lookup_cache.hpp"

namespace rpq {

std::vector<Neighbor> CachedLookupSource::neighbors(NodeId v, const SymbolSet& wanted) {
    auto key = std::make_pair(v, wanted);
    if (const auto it = cache_.find(key); it != cache_.end()) return it->second;

    auto result = inner_.neighbors(v, wanted);
    broadcast_symbols_ += 1 + wanted.size();
    retrieved_symbols_ += 3 * result.size();
    for (const auto& nb : result) retrieved_edges_.insert(ExtendedEdge{v, nb.label, nb.node});
    cache_.emplace(std::move(key), result);
    return result;
}

} // namespace rpq
