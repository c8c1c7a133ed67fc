#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cumret::rng {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// FNV-1a over the bytes of `text`. Stable across platforms, unlike std::hash.
std::uint64_t fnv1a64(std::string_view text) noexcept;

/// Seed for stream `index` under name `key`, derived from `master`.
///
/// Streams for distinct (key, index) pairs are decorrelated, so replicas can be
/// evaluated in any order or on any worker and still see the same draws.
std::uint64_t stream_seed(std::uint64_t master, std::string_view key, std::uint64_t index) noexcept;

/// Seeded generator with distribution helpers whose output is fully specified
/// (std::uniform_int_distribution and friends are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer on the closed range [lo, hi].
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

    /// Uniform double on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform double on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller (no cached second variate).
    double normal();

private:
    std::mt19937_64 engine_;
};

}  // namespace cumret::rng
