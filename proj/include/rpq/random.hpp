#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace rpq {

/// SplitMix64 (Steele, Lea, Flood 2014). The output sequence is fully
/// specified by the 64-bit state, so seeds reproduce on every platform.
/// Satisfies UniformRandomBitGenerator.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Seed of the independent stream number `index` under a master seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return SplitMix64::mix(SplitMix64::mix(seed) ^ SplitMix64::mix(index + 0x632be59bd9b4e019ULL));
}

/// Uniform integer in [0, bound) by rejection; bound > 0.
inline std::uint64_t uniform_below(SplitMix64& rng, std::uint64_t bound) noexcept {
    const std::uint64_t limit = SplitMix64::max() - SplitMix64::max() % bound;
    std::uint64_t x = 0;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(SplitMix64& rng) noexcept {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Fisher-Yates shuffle driven by uniform_below (std::shuffle is not
/// reproducible across standard libraries).
template <typename T>
void shuffle(std::vector<T>& items, SplitMix64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

/// `count` distinct values from [0, universe), in draw order (Floyd's
/// algorithm followed by a shuffle). Requires count <= universe.
std::vector<std::uint32_t> sample_distinct(SplitMix64& rng, std::uint32_t universe, std::uint32_t count);

} // namespace rpq
