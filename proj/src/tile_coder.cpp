#include "tdkit/tile_coder.hpp"

#include "tdkit/error.hpp"
#include "tdkit/rng.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace tdkit {

void TileCoderConfig::validate() const {
    if (num_signals == 0 || bins_per_signal < 2 || num_tilings == 0) {
        throw ContractError("TileCoderConfig: need num_signals >= 1, bins >= 2, tilings >= 1");
    }
    if (hash_size < num_tilings + 1) {
        throw ContractError("TileCoderConfig: hash_size must be at least num_tilings + 1");
    }
}

TileCoder::TileCoder(TileCoderConfig cfg) : cfg_(cfg), tiles_per_tiling_(1) {
    cfg_.validate();
    for (std::size_t d = 0; d < cfg_.num_signals; ++d) {
        if (tiles_per_tiling_ > std::numeric_limits<std::uint64_t>::max() / cfg_.bins_per_signal) {
            throw ContractError("TileCoderConfig: unhashed index space overflows 64 bits");
        }
        tiles_per_tiling_ *= cfg_.bins_per_signal;
    }
    segment_ = (cfg_.hash_size - (cfg_.include_bias ? 1 : 0)) / cfg_.num_tilings;
}

std::uint64_t TileCoder::raw_space_size() const {
    return tiles_per_tiling_ * cfg_.num_tilings + (cfg_.include_bias ? 1 : 0);
}

void TileCoder::coords(std::span<const double> frame, std::size_t tiling,
                       std::vector<std::uint64_t>& out) const {
    const double shift = static_cast<double>(tiling) / static_cast<double>(cfg_.num_tilings);
    const double scale = static_cast<double>(cfg_.bins_per_signal - 1);
    out.clear();
    for (double x : frame) out.push_back(static_cast<std::uint64_t>(std::floor(x * scale + shift)));
}

namespace {

void check_frame(std::span<const double> frame, std::size_t num_signals) {
    if (frame.size() != num_signals) {
        throw ContractError("tile_code: frame has " + std::to_string(frame.size()) +
                            " values, expected " + std::to_string(num_signals));
    }
    for (std::size_t d = 0; d < frame.size(); ++d) {
        if (!(frame[d] >= 0.0 && frame[d] <= 1.0)) {
            throw ContractError("tile_code: channel " + std::to_string(d) + " value " +
                                std::to_string(frame[d]) + " is outside [0, 1]");
        }
    }
}

} // namespace

std::vector<std::uint64_t> TileCoder::raw_indices(std::span<const double> frame) const {
    check_frame(frame, cfg_.num_signals);
    std::vector<std::uint64_t> out;
    std::vector<std::uint64_t> c;
    for (std::size_t t = 0; t < cfg_.num_tilings; ++t) {
        coords(frame, t, c);
        std::uint64_t index = 0;
        std::uint64_t radix = 1;
        for (std::uint64_t cd : c) {
            index += cd * radix;
            radix *= cfg_.bins_per_signal;
        }
        out.push_back(t * tiles_per_tiling_ + index);
    }
    if (cfg_.include_bias) out.push_back(tiles_per_tiling_ * cfg_.num_tilings);
    return out;
}

FeatureVector TileCoder::encode(std::span<const double> frame) const {
    check_frame(frame, cfg_.num_signals);
    std::vector<std::size_t> active;
    active.reserve(active_per_frame());
    std::vector<std::uint64_t> c;
    const std::uint64_t base = 0xcbf29ce484222325ULL ^ mix64(cfg_.seed);
    for (std::size_t t = 0; t < cfg_.num_tilings; ++t) {
        coords(frame, t, c);
        std::uint64_t h = base;
        h = (h ^ static_cast<std::uint64_t>(t)) * 0x100000001b3ULL;
        for (std::uint64_t cd : c) h = (h ^ cd) * 0x100000001b3ULL;
        h = mix64(h);
        active.push_back(t * segment_ + static_cast<std::size_t>(h % segment_));
    }
    if (cfg_.include_bias) active.push_back(cfg_.hash_size - 1);
    return FeatureVector::binary(cfg_.hash_size, std::move(active));
}

} // namespace tdkit
