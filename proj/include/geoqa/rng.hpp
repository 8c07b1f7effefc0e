#pragma once

/// @file rng.hpp
/// Counter-based deterministic random stream. Every question slot gets its
/// own stream keyed by (seed, tile id, slot index), which makes generation
/// output independent of worker count and scheduling order. Only integer
/// arithmetic is used, so streams are identical across platforms.

#include <cstdint>
#include <string_view>

namespace geoqa {

namespace detail {

inline constexpr std::uint64_t splitmix_finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ull;
    }
    return h;
}

}  // namespace detail

/// SplitMix64 stream over a derived key.
class Rng {
public:
    explicit Rng(std::uint64_t key) : state_(key) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return detail::splitmix_finalize(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be > 0. Uses the high bits via a
    /// fixed-point multiply so the draw is platform-stable.
    std::uint32_t uniform(std::uint32_t n) {
        return std::uint32_t(((next_u64() >> 32) * std::uint64_t(n)) >> 32);
    }

    bool bernoulli(double p) { return next_double() < p; }

private:
    std::uint64_t state_;
};

/// Stream key for one question slot of one tile.
inline std::uint64_t slot_key(std::uint64_t seed, std::string_view tile_id, std::uint64_t slot) {
    const std::uint64_t k = detail::splitmix_finalize(seed) ^ detail::fnv1a64(tile_id);
    return detail::splitmix_finalize(k + 0x632BE59BD9B4E019ull * (slot + 1));
}

/// Stream key for a named auxiliary draw (split shuffles, bias probe).
inline std::uint64_t named_key(std::uint64_t seed, std::string_view name) {
    return detail::splitmix_finalize(detail::splitmix_finalize(seed) ^ detail::fnv1a64(name));
}

}  // namespace geoqa
