#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace tdkit {

using Rng = std::mt19937_64;

/// splitmix64 finaliser; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(mix64(mix64(master) ^ a) ^ b);
}

enum class StreamPurpose : std::uint64_t {
    mrp_generation = 1,
    representation = 2,
    trajectory = 3,
};

std::string_view to_string(StreamPurpose p);

/// Named, pre-split RNG streams keyed by (run, purpose). Streams never
/// share state, so cells can be evaluated in any order or in parallel.
struct SeedPlan {
    std::uint64_t master_seed = 0;

    std::uint64_t seed_for(std::uint64_t run, StreamPurpose purpose) const {
        return derive_seed(master_seed, run, static_cast<std::uint64_t>(purpose));
    }
    Rng stream(std::uint64_t run, StreamPurpose purpose) const { return Rng(seed_for(run, purpose)); }
};

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
inline double standard_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

} // namespace tdkit
