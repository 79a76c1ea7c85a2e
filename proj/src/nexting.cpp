#include "tdkit/nexting.hpp"

#include "tdkit/error.hpp"
#include "tdkit/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace tdkit {

void GvfSpec::validate(std::size_t num_signals) const {
    if (target_channel >= num_signals) throw ContractError("GvfSpec: target channel out of range");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ContractError("GvfSpec: gamma must be in [0, 1)");
}

std::vector<double> SignalSet::channel(std::size_t c) const {
    if (c >= num_channels()) throw ContractError("SignalSet: channel out of range");
    std::vector<double> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(f.values[c]);
    return out;
}

std::size_t SignalSet::channel_index(const std::string& name) const {
    const auto it = std::find(channels.begin(), channels.end(), name);
    if (it == channels.end()) throw ContractError("SignalSet: no channel named '" + name + "'");
    return static_cast<std::size_t>(it - channels.begin());
}

double SignalSet::denormalize(std::size_t c, double x) const {
    return min.at(c) + x * (max.at(c) - min.at(c));
}

std::vector<double> compute_returns(std::span<const double> signal, double gamma) {
    if (signal.empty()) throw ContractError("compute_returns: empty signal");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ContractError("compute_returns: gamma must be in [0, 1)");
    const std::size_t n = signal.size();
    std::vector<double> g(n);
    g[n - 1] = signal[n - 1] / (1.0 - gamma);
    for (std::size_t t = n - 1; t-- > 0;) g[t] = signal[t + 1] + gamma * g[t + 1];
    return g;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& text, std::size_t row, const std::string& column) {
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    while (begin < end && *begin == ' ') ++begin;
    while (end > begin && *(end - 1) == ' ') --end;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || begin == end || !std::isfinite(value)) {
        throw FormatError("load_signals: non-numeric cell '" + text + "' in column '" + column +
                          "' at data row " + std::to_string(row + 1));
    }
    return value;
}

void normalize_in_place(SignalSet& set) {
    const std::size_t c = set.num_channels();
    set.min.assign(c, std::numeric_limits<double>::infinity());
    set.max.assign(c, -std::numeric_limits<double>::infinity());
    for (const auto& f : set.frames) {
        for (std::size_t j = 0; j < c; ++j) {
            set.min[j] = std::min(set.min[j], f.values[j]);
            set.max[j] = std::max(set.max[j], f.values[j]);
        }
    }
    for (auto& f : set.frames) {
        for (std::size_t j = 0; j < c; ++j) {
            const double range = set.max[j] - set.min[j];
            f.values[j] = range > 0.0 ? std::clamp((f.values[j] - set.min[j]) / range, 0.0, 1.0) : 0.0;
        }
    }
}

} // namespace

SignalSet load_signals(const std::filesystem::path& path, const std::vector<std::string>& columns) {
    std::ifstream in(path);
    if (!in) throw FormatError("load_signals: cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw FormatError("load_signals: empty file");
    const auto header = split_csv_line(line);

    SignalSet set;
    std::vector<std::size_t> pick;
    if (columns.empty()) {
        set.channels = header;
        for (std::size_t j = 0; j < header.size(); ++j) pick.push_back(j);
    } else {
        for (const auto& name : columns) {
            const auto it = std::find(header.begin(), header.end(), name);
            if (it == header.end()) throw FormatError("load_signals: missing column '" + name + "'");
            pick.push_back(static_cast<std::size_t>(it - header.begin()));
            set.channels.push_back(name);
        }
    }

    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw FormatError("load_signals: data row " + std::to_string(row + 1) + " has " +
                              std::to_string(cells.size()) + " cells, header has " +
                              std::to_string(header.size()));
        }
        SignalFrame frame{row, {}};
        for (std::size_t j : pick) frame.values.push_back(parse_cell(cells[j], row, header[j]));
        set.frames.push_back(std::move(frame));
        ++row;
    }
    if (set.frames.size() < 2) throw FormatError("load_signals: need at least 2 data rows");
    normalize_in_place(set);
    return set;
}

SignalSet synth_signals(const std::string& kind, std::size_t steps, std::uint64_t seed) {
    if (steps < 2) throw ContractError("synth_signals: need at least 2 steps");
    SignalSet set;
    set.channels = {"position", "force", "velocity", "emg_a", "emg_b"};
    set.frames.reserve(steps);
    if (kind == "constant") {
        for (std::size_t t = 0; t < steps; ++t) set.frames.push_back({t, std::vector<double>(5, 0.5)});
        set.min.assign(5, 0.5);
        set.max.assign(5, 0.5);
        return set;
    }
    if (kind != "arm") throw ContractError("synth_signals: unknown kind '" + kind + "'");

    Rng rng(derive_seed(seed, 0x5167));
    constexpr double kPeriod = 500.0;
    constexpr double kSwitchProb = 0.15;
    const double phase = 2.0 * std::numbers::pi * uniform01(rng);
    double force = uniform01(rng) < 0.5 ? 0.1 : 0.9;
    double emg_a = 0.5;
    double emg_b = 0.5;
    for (std::size_t t = 0; t < steps; ++t) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(t) / kPeriod + phase;
        const double position = 0.5 + 0.4 * std::sin(angle);
        if (uniform01(rng) < kSwitchProb) force = force < 0.5 ? 0.9 : 0.1;
        const double velocity = std::clamp(0.5 + 0.4 * std::cos(angle) + 0.05 * standard_normal(rng), 0.0, 1.0);
        emg_a = std::clamp(0.8 * emg_a + 0.2 * force + 0.05 * standard_normal(rng), 0.0, 1.0);
        emg_b = std::clamp(0.7 * emg_b + 0.3 * position + 0.05 * standard_normal(rng), 0.0, 1.0);
        set.frames.push_back({t, {position, force, velocity, emg_a, emg_b}});
    }
    normalize_in_place(set);
    return set;
}

std::vector<FeatureVector> encode_all(const SignalSet& data, const TileCoder& coder) {
    std::vector<FeatureVector> out;
    out.reserve(data.size());
    for (const auto& f : data.frames) out.push_back(coder.encode(f.values));
    return out;
}

NextingResult run_nexting(std::span<const FeatureVector> features, std::span<const double> target,
                          std::span<const double> returns, const TdConfig& td_cfg,
                          bool keep_series) {
    if (features.size() < 2) throw ContractError("run_nexting: need at least 2 frames");
    if (target.size() != features.size() || returns.size() != features.size()) {
        throw ContractError("run_nexting: features, target and returns differ in length");
    }
    TdLearner learner(td_cfg, features.front().dim());
    learner.start_episode();

    NextingResult result;
    const std::size_t steps = features.size() - 1;
    if (keep_series) {
        result.predictions.reserve(steps);
        result.returns.assign(returns.begin(), returns.begin() + static_cast<std::ptrdiff_t>(steps));
        result.abs_errors.reserve(steps);
    }
    double total = 0.0;
    for (std::size_t t = 0; t < steps; ++t) {
        const double prediction = learner.predict(features[t]);
        const double err = std::abs(prediction - returns[t]);
        total += err;
        if (keep_series) {
            result.predictions.push_back(prediction);
            result.abs_errors.push_back(err);
        }
        learner.step(features[t], target[t + 1], features[t + 1], false);
        result.steps = t + 1;
        if (learner.diverged()) {
            result.diverged = true;
            break;
        }
    }
    result.mean_abs_error = result.diverged ? std::numeric_limits<double>::infinity()
                                            : total / static_cast<double>(steps);
    return result;
}

NextingResult run_nexting(const SignalSet& data, const TileCoderConfig& coder_cfg,
                          const GvfSpec& gvf, TdConfig td_cfg) {
    if (data.size() < 2) throw ContractError("run_nexting: need at least 2 frames");
    gvf.validate(data.num_channels());
    if (coder_cfg.num_signals != data.num_channels()) {
        throw ContractError("run_nexting: tile coder channel count differs from the data");
    }
    td_cfg.gamma = gvf.gamma;
    const TileCoder coder(coder_cfg);
    const auto features = encode_all(data, coder);
    const auto target = data.channel(gvf.target_channel);
    const auto returns = compute_returns(target, gvf.gamma);
    return run_nexting(features, target, returns, td_cfg);
}

} // namespace tdkit
