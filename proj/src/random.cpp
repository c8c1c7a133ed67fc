#include "cumret/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cumret::rng {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view text) noexcept
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::uint64_t stream_seed(std::uint64_t master, std::string_view key, std::uint64_t index) noexcept
{
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ fnv1a64(key));
    return splitmix64(h ^ splitmix64(index));
}

std::uint64_t Rng::uniform_int(std::uint64_t lo, std::uint64_t hi)
{
    if (lo > hi) {
        throw std::invalid_argument("uniform_int: lo > hi");
    }
    const std::uint64_t span = hi - lo;
    if (span == std::numeric_limits<std::uint64_t>::max()) {
        return engine_();
    }
    const std::uint64_t range = span + 1;
    // Reject the tail so every residue is equally likely.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                (std::numeric_limits<std::uint64_t>::max() % range + 1) % range;
    std::uint64_t draw = engine_();
    while (draw > limit) {
        draw = engine_();
    }
    return lo + draw % range;
}

double Rng::normal()
{
    double u1 = uniform01();
    while (u1 <= 0.0) {
        u1 = uniform01();
    }
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace cumret::rng
