#pragma once

#include "tdkit/linear.hpp"
#include "tdkit/td_learner.hpp"
#include "tdkit/tile_coder.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace tdkit {

struct GvfSpec {
    std::size_t target_channel = 0;
    double gamma = 0.97;

    void validate(std::size_t num_signals) const;
};

struct SignalFrame {
    std::size_t step = 0;
    std::vector<double> values; ///< normalised to [0, 1]
};

/// Multi-channel time series plus the per-channel min/max used to
/// normalise it.
struct SignalSet {
    std::vector<std::string> channels;
    std::vector<SignalFrame> frames;
    std::vector<double> min;
    std::vector<double> max;

    std::size_t size() const { return frames.size(); }
    std::size_t num_channels() const { return channels.size(); }
    std::vector<double> channel(std::size_t c) const;
    std::size_t channel_index(const std::string& name) const;
    /// Inverse of the min-max normalisation for channel c.
    double denormalize(std::size_t c, double x) const;
};

/// G_t = x_{t+1} + gamma G_{t+1}. The series is extended past its end by
/// holding the last value, so G_{T-1} = x_{T-1} / (1 - gamma).
std::vector<double> compute_returns(std::span<const double> signal, double gamma);

/// Reads a CSV with a header row. `columns` selects and orders channels
/// (empty: every column). Each channel is min-max normalised to [0, 1]; a
/// constant channel maps to 0.
SignalSet load_signals(const std::filesystem::path& path,
                       const std::vector<std::string>& columns = {});

/// "arm": 5 channels, a slow sine (smooth), a random square wave (rapid),
/// and three noisy channels correlated with them. "constant": 5 channels
/// fixed at 0.5.
SignalSet synth_signals(const std::string& kind, std::size_t steps, std::uint64_t seed);

struct NextingResult {
    std::vector<double> predictions; ///< theta_t' phi_t before the update at t
    std::vector<double> returns;     ///< G_t
    std::vector<double> abs_errors;
    double mean_abs_error = 0.0;     ///< +inf when the learner diverged
    bool diverged = false;
    std::size_t steps = 0;           ///< transitions processed
};

/// One continuing episode over pre-encoded features: at step t the learner
/// sees (phi_t, x_{t+1}, phi_{t+1}). Errors cover t = 0 .. T-2.
NextingResult run_nexting(std::span<const FeatureVector> features, std::span<const double> target,
                          std::span<const double> returns, const TdConfig& td_cfg,
                          bool keep_series = true);

NextingResult run_nexting(const SignalSet& data, const TileCoderConfig& coder_cfg,
                          const GvfSpec& gvf, TdConfig td_cfg);

std::vector<FeatureVector> encode_all(const SignalSet& data, const TileCoder& coder);

} // namespace tdkit
