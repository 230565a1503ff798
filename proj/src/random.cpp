#include "rpq/random.hpp"

#include <unordered_set>

namespace rpq {

std::vector<std::uint32_t> sample_distinct(SplitMix64& rng, std::uint32_t universe, std::uint32_t count) {
    std::vector<std::uint32_t> picked;
    if (count == 0 || universe == 0) return picked;
    if (count > universe) count = universe;
    picked.reserve(count);
    std::unordered_set<std::uint32_t> seen;
    seen.reserve(count * 2);
    // Floyd: for j in [universe-count, universe) pick t in [0, j]; take j on collision.
    for (std::uint64_t j = universe - count; j < universe; ++j) {
        auto t = static_cast<std::uint32_t>(uniform_below(rng, j + 1));
        if (!seen.insert(t).second) {
            t = static_cast<std::uint32_t>(j);
            seen.insert(t);
        }
        picked.push_back(t);
    }
    shuffle(picked, rng);
    return picked;
}

} // namespace rpq
