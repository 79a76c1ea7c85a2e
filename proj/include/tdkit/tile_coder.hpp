#pragma once

#include "tdkit/linear.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tdkit {

struct TileCoderConfig {
    std::size_t num_signals = 5;
    std::size_t bins_per_signal = 10;
    std::size_t num_tilings = 8;
    std::size_t hash_size = 200'000;
    bool include_bias = true;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Joint hashed tile coder over all input channels.
///
/// Tiling t (0 <= t < T) places channel value x in [0, 1] into bin
///   c = floor(x * (B - 1) + t / T),  0 <= c < B,
/// i.e. tiles are 1 / (B - 1) wide and tiling t is shifted by t / T of a
/// tile. Unhashed, tiling t's tile has index t * B^D + sum_d c_d B^d and the
/// bias unit is T * B^D, for T * B^D + 1 indices in total.
///
/// Hashing: the output space [0, H) is split into T segments of
/// S = floor((H - bias) / T) slots; the bias unit, if enabled, is H - 1.
/// Tiling t maps to t * S + (h mod S), where h is computed over 64-bit words:
///   h = 0xcbf29ce484222325 ^ mix64(seed)
///   for w in (t, c_0, ..., c_{D-1}):  h = (h ^ w) * 0x100000001b3
///   h = mix64(h)
/// with mix64 the splitmix64 step defined in rng.hpp. Segments keep tilings
/// from colliding with each other, so every frame has exactly T (+1) active
/// features.
class TileCoder {
public:
    explicit TileCoder(TileCoderConfig cfg);

    const TileCoderConfig& config() const { return cfg_; }
    std::size_t dim() const { return cfg_.hash_size; }
    std::size_t active_per_frame() const { return cfg_.num_tilings + (cfg_.include_bias ? 1 : 0); }
    /// Size of the unhashed index space, T * B^D + bias.
    std::uint64_t raw_space_size() const;

    /// Binary sparse features; throws if a value is outside [0, 1].
    FeatureVector encode(std::span<const double> frame) const;
    /// Unhashed indices, one per tiling then the bias unit.
    std::vector<std::uint64_t> raw_indices(std::span<const double> frame) const;

private:
    void coords(std::span<const double> frame, std::size_t tiling,
                std::vector<std::uint64_t>& out) const;

    TileCoderConfig cfg_;
    std::uint64_t tiles_per_tiling_;
    std::size_t segment_;
};

inline FeatureVector tile_code(const TileCoderConfig& cfg, std::span<const double> frame) {
    return TileCoder(cfg).encode(frame);
}

} // namespace tdkit
