#pragma once

#include "tdkit/linear.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace tdkit {

enum class TdVariant { accumulate, replace, true_online };

std::string_view to_string(TdVariant v);
/// Accepts "accumulate", "replace", "true_online" (or "true-online").
TdVariant parse_variant(std::string_view name);

struct TdConfig {
    double alpha = 0.1;
    double lambda = 0.0;
    double gamma = 1.0;
    TdVariant variant = TdVariant::true_online;
    /// Initial weights; when empty every weight starts at theta_fill.
    std::vector<double> theta_init;
    double theta_fill = 0.0;
    /// Any |theta_i| or |e_i| above this flags the learner as diverged.
    double divergence_bound = 1e100;
    /// 0 keeps the trace dense (every step touches all n entries). A positive
    /// value switches to an active-set trace where entries whose magnitude
    /// decays below the cutoff are dropped; meant for hashed feature spaces
    /// with n >> m.
    double trace_cutoff = 0.0;

    void validate() const;
};

struct TdError {
    double value = 0.0;
};

/// Mutable per-learner state: theta, the eligibility trace e and v_old.
struct LearnerState {
    WeightVector theta;
    std::vector<double> trace;
    double v_old = 0.0;
    bool diverged = false;

    /// Trace is known to be all zeros (start of an episode).
    bool trace_zero = true;
    double last_delta = 0.0;
    // Active-set bookkeeping, used only when trace_cutoff > 0.
    std::vector<std::size_t> active;
    std::vector<unsigned char> in_active;

    static LearnerState make(const TdConfig& cfg, std::size_t n);
    std::size_t dim() const { return theta.size(); }
};

/// Conventional TD(lambda) with accumulating traces:
///   delta = R + gamma theta'phi' - theta'phi, e = gamma lambda e + phi,
///   theta += alpha delta e.
/// On terminal transitions theta'phi' is taken as 0 and phi_next is ignored.
TdError step_accumulate(LearnerState& state, const TdConfig& cfg, const FeatureVector& phi,
                        double reward, const FeatureVector& phi_next, bool terminal,
                        OpCounter* ops = nullptr);

/// TD(lambda) with replacing traces; phi must be binary.
TdError step_replace(LearnerState& state, const TdConfig& cfg, const FeatureVector& phi,
                     double reward, const FeatureVector& phi_next, bool terminal,
                     OpCounter* ops = nullptr);

/// True online TD(lambda) with a dutch trace:
///   e = gamma lambda e + phi - alpha gamma lambda (e'phi) phi
///   theta += alpha (delta + v - v_old) e - alpha (v - v_old) phi
TdError step_true_online(LearnerState& state, const TdConfig& cfg, const FeatureVector& phi,
                         double reward, const FeatureVector& phi_next, bool terminal,
                         OpCounter* ops = nullptr);

/// Dispatches on cfg.variant.
TdError step(LearnerState& state, const TdConfig& cfg, const FeatureVector& phi, double reward,
             const FeatureVector& phi_next, bool terminal, OpCounter* ops = nullptr);

/// Zeroes the trace and v_old; theta is untouched.
void start_episode(LearnerState& state);

double predict(const LearnerState& state, const FeatureVector& phi);

/// Owns a config and its state.
class TdLearner {
public:
    TdLearner(TdConfig cfg, std::size_t n);

    TdError step(const FeatureVector& phi, double reward, const FeatureVector& phi_next,
                 bool terminal, OpCounter* ops = nullptr) {
        return tdkit::step(state_, cfg_, phi, reward, phi_next, terminal, ops);
    }
    void start_episode() { tdkit::start_episode(state_); }
    double predict(const FeatureVector& phi) const { return tdkit::predict(state_, phi); }
    /// Back to theta_init with a clear trace and divergence flag.
    void reset();

    const TdConfig& config() const { return cfg_; }
    const LearnerState& state() const { return state_; }
    const WeightVector& theta() const { return state_.theta; }
    const std::vector<double>& trace() const { return state_.trace; }
    bool diverged() const { return state_.diverged; }

private:
    TdConfig cfg_;
    LearnerState state_;
};

/// Debug snapshots of (theta, e, v_old).
std::string snapshot_json(const LearnerState& state);
void write_snapshot_csv(std::ostream& out, const LearnerState& state);

} // namespace tdkit
