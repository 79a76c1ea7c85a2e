#include "tdkit/td_learner.hpp"

#include "tdkit/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace tdkit {

std::string_view to_string(TdVariant v) {
    switch (v) {
    case TdVariant::accumulate: return "accumulate";
    case TdVariant::replace: return "replace";
    case TdVariant::true_online: return "true_online";
    }
    return "?";
}

TdVariant parse_variant(std::string_view name) {
    if (name == "accumulate") return TdVariant::accumulate;
    if (name == "replace") return TdVariant::replace;
    if (name == "true_online" || name == "true-online") return TdVariant::true_online;
    throw ContractError("unknown TD variant '" + std::string(name) + "'");
}

void TdConfig::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ContractError("TdConfig: alpha must be > 0");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ContractError("TdConfig: lambda must be in [0, 1]");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ContractError("TdConfig: gamma must be in [0, 1]");
    if (!(divergence_bound > 0.0)) throw ContractError("TdConfig: divergence_bound must be > 0");
    if (!(trace_cutoff >= 0.0)) throw ContractError("TdConfig: trace_cutoff must be >= 0");
}

LearnerState LearnerState::make(const TdConfig& cfg, std::size_t n) {
    cfg.validate();
    LearnerState s;
    if (!cfg.theta_init.empty()) {
        if (cfg.theta_init.size() != n) {
            throw ContractError("TdConfig: theta_init has " + std::to_string(cfg.theta_init.size()) +
                                " entries, expected " + std::to_string(n));
        }
        s.theta = WeightVector(cfg.theta_init);
    } else {
        s.theta = WeightVector(n, cfg.theta_fill);
    }
    s.trace.assign(n, 0.0);
    if (cfg.trace_cutoff > 0.0) s.in_active.assign(n, 0);
    return s;
}

namespace {

/// Trace kernels for both storage modes. Dense mode walks all n entries,
/// active-set mode walks only entries with a live trace.
class Trace {
public:
    Trace(LearnerState& s, const TdConfig& cfg)
        : s_(s), sparse_(cfg.trace_cutoff > 0.0), cutoff_(cfg.trace_cutoff),
          bound_(cfg.divergence_bound) {}

    double dot_phi(const FeatureVector& phi, OpCounter* ops) const { return dot(s_.trace, phi, ops); }

    void decay(double factor, OpCounter* ops) {
        if (!sparse_) {
            scale_into(s_.trace, factor, ops);
            return;
        }
        auto& active = s_.active;
        if (ops != nullptr) ops->mul(active.size());
        std::size_t keep = 0;
        for (std::size_t k = 0; k < active.size(); ++k) {
            const std::size_t i = active[k];
            double& e = s_.trace[i];
            e *= factor;
            if (std::abs(e) < cutoff_) {
                e = 0.0;
                s_.in_active[i] = 0;
            } else {
                active[keep++] = i;
            }
        }
        active.resize(keep);
    }

    /// e_i <- e_i + phi_i over phi's support.
    void add_phi(const FeatureVector& phi, OpCounter* ops) {
        phi.for_each([&](std::size_t i, double v) {
            touch(i);
            s_.trace[i] += v;
        });
        if (ops != nullptr) ops->add(phi.active_count());
    }

    /// e_i <- e_i + phi_i - c phi_i over phi's support.
    void add_dutch(const FeatureVector& phi, double c, OpCounter* ops) {
        phi.for_each([&](std::size_t i, double v) {
            touch(i);
            s_.trace[i] = s_.trace[i] + v - c * v;
        });
        if (ops != nullptr) {
            ops->mul(phi.active_count());
            ops->add(2 * phi.active_count());
        }
    }

    /// e_i <- 1 wherever phi_i == 1.
    void replace_phi(const FeatureVector& phi) {
        phi.for_each([&](std::size_t i, double v) {
            if (v == 1.0) {
                touch(i);
                s_.trace[i] = 1.0;
            }
        });
    }

    /// theta <- theta + scalar * e. Returns false if any touched entry of
    /// theta or e is non-finite or beyond the divergence bound.
    bool theta_axpy(double scalar, OpCounter* ops) {
        auto& theta = s_.theta;
        bool ok = true;
        auto update = [&](std::size_t i) {
            const double e = s_.trace[i];
            theta[i] += scalar * e;
            ok &= within(theta[i]) && within(e);
        };
        if (sparse_) {
            for (std::size_t i : s_.active) update(i);
            if (ops != nullptr) {
                ops->mul(s_.active.size());
                ops->add(s_.active.size());
            }
        } else {
            const std::size_t n = theta.size();
            for (std::size_t i = 0; i < n; ++i) update(i);
            if (ops != nullptr) {
                ops->mul(n);
                ops->add(n);
            }
        }
        return ok;
    }

    /// theta <- theta - scalar * phi.
    bool theta_sub_phi(const FeatureVector& phi, double scalar, OpCounter* ops) {
        auto& theta = s_.theta;
        bool ok = true;
        phi.for_each([&](std::size_t i, double v) {
            theta[i] -= scalar * v;
            ok &= within(theta[i]);
        });
        if (ops != nullptr) {
            ops->mul(phi.active_count());
            ops->add(phi.active_count());
        }
        return ok;
    }

private:
    bool within(double x) const { return std::abs(x) <= bound_; }

    void touch(std::size_t i) {
        if (sparse_ && s_.in_active[i] == 0) {
            s_.in_active[i] = 1;
            s_.active.push_back(i);
        }
    }

    LearnerState& s_;
    bool sparse_;
    double cutoff_;
    double bound_;
};

void check_step_inputs(const LearnerState& s, const FeatureVector& phi,
                       const FeatureVector& phi_next, bool terminal) {
    if (s.diverged) throw ContractError("learner has diverged; reset before stepping again");
    if (phi.dim() != s.dim()) {
        throw ContractError("step: feature dimension " + std::to_string(phi.dim()) +
                            " does not match weight dimension " + std::to_string(s.dim()));
    }
    if (!terminal && phi_next.dim() != s.dim()) {
        throw ContractError("step: next feature dimension " + std::to_string(phi_next.dim()) +
                            " does not match weight dimension " + std::to_string(s.dim()));
    }
}

/// Value of phi_next, 0 on terminal transitions.
double bootstrap_value(const LearnerState& s, const FeatureVector& phi_next, bool terminal,
                       OpCounter* ops) {
    return terminal ? 0.0 : dot(s.theta, phi_next, ops);
}

double td_delta(double reward, double gamma, double v_next, double v, bool terminal,
                OpCounter* ops) {
    if (terminal) {
        if (ops != nullptr) ops->add(1);
        return reward - v;
    }
    if (ops != nullptr) {
        ops->mul(1);
        ops->add(2);
    }
    return reward + gamma * v_next - v;
}

TdError finish(LearnerState& s, double delta, bool ok) {
    s.trace_zero = false;
    if (!std::isfinite(delta)) ok = false;
    if (!ok) {
        s.diverged = true;
        return {s.last_delta};
    }
    s.last_delta = delta;
    return {delta};
}

} // namespace

TdError step_accumulate(LearnerState& s, const TdConfig& cfg, const FeatureVector& phi,
                        double reward, const FeatureVector& phi_next, bool terminal,
                        OpCounter* ops) {
    check_step_inputs(s, phi, phi_next, terminal);
    Trace trace(s, cfg);

    const double v = dot(s.theta, phi, ops);
    const double v_next = bootstrap_value(s, phi_next, terminal, ops);
    const double delta = td_delta(reward, cfg.gamma, v_next, v, terminal, ops);

    const double decay = cfg.gamma * cfg.lambda;
    trace.decay(decay, ops);
    trace.add_phi(phi, ops);

    const double scaled = cfg.alpha * delta;
    if (ops != nullptr) ops->mul(2);
    const bool ok = trace.theta_axpy(scaled, ops);
    return finish(s, delta, ok);
}

TdError step_replace(LearnerState& s, const TdConfig& cfg, const FeatureVector& phi,
                     double reward, const FeatureVector& phi_next, bool terminal,
                     OpCounter* ops) {
    if (!phi.is_binary()) {
        std::size_t bad = 0;
        bool found = false;
        phi.for_each([&](std::size_t i, double v) {
            if (!found && v != 0.0 && v != 1.0) {
                bad = i;
                found = true;
            }
        });
        throw ContractError("step_replace: replacing traces need binary features; entry " +
                            std::to_string(bad) + " is not 0 or 1");
    }
    check_step_inputs(s, phi, phi_next, terminal);
    Trace trace(s, cfg);

    const double v = dot(s.theta, phi, ops);
    const double v_next = bootstrap_value(s, phi_next, terminal, ops);
    const double delta = td_delta(reward, cfg.gamma, v_next, v, terminal, ops);

    const double decay = cfg.gamma * cfg.lambda;
    trace.decay(decay, ops);
    trace.replace_phi(phi);

    const double scaled = cfg.alpha * delta;
    if (ops != nullptr) ops->mul(2);
    const bool ok = trace.theta_axpy(scaled, ops);
    return finish(s, delta, ok);
}

TdError step_true_online(LearnerState& s, const TdConfig& cfg, const FeatureVector& phi,
                         double reward, const FeatureVector& phi_next, bool terminal,
                         OpCounter* ops) {
    check_step_inputs(s, phi, phi_next, terminal);
    Trace trace(s, cfg);

    const double v = dot(s.theta, phi, ops);
    const double v_next = bootstrap_value(s, phi_next, terminal, ops);
    const double delta = td_delta(reward, cfg.gamma, v_next, v, terminal, ops);

    const double decay = cfg.gamma * cfg.lambda;
    if (ops != nullptr) ops->mul(1);
    bool ok = true;
    if (decay == 0.0 || s.trace_zero) {
        // e_{t-1}'phi = 0 here, so e becomes exactly phi and the
        // delta-correction alpha (v - v_old)(e - phi) vanishes.
        trace.decay(decay, ops);
        trace.add_phi(phi, ops);
        const double scaled = cfg.alpha * delta;
        if (ops != nullptr) ops->mul(1);
        ok = trace.theta_axpy(scaled, ops);
    } else {
        const double e_phi = trace.dot_phi(phi, ops);
        const double c = cfg.alpha * decay * e_phi;
        if (ops != nullptr) ops->mul(2);
        trace.decay(decay, ops);
        trace.add_dutch(phi, c, ops);

        const double v_diff = v - s.v_old;
        const double trace_scale = cfg.alpha * (delta + v_diff);
        const double phi_scale = cfg.alpha * v_diff;
        if (ops != nullptr) {
            ops->add(2);
            ops->mul(2);
        }
        ok = trace.theta_axpy(trace_scale, ops);
        ok &= trace.theta_sub_phi(phi, phi_scale, ops);
    }
    s.v_old = v_next;
    return finish(s, delta, ok);
}

TdError step(LearnerState& s, const TdConfig& cfg, const FeatureVector& phi, double reward,
             const FeatureVector& phi_next, bool terminal, OpCounter* ops) {
    switch (cfg.variant) {
    case TdVariant::accumulate: return step_accumulate(s, cfg, phi, reward, phi_next, terminal, ops);
    case TdVariant::replace: return step_replace(s, cfg, phi, reward, phi_next, terminal, ops);
    case TdVariant::true_online:
        return step_true_online(s, cfg, phi, reward, phi_next, terminal, ops);
    }
    throw ContractError("step: unknown variant");
}

void start_episode(LearnerState& s) {
    if (s.in_active.empty()) {
        std::fill(s.trace.begin(), s.trace.end(), 0.0);
    } else {
        for (std::size_t i : s.active) {
            s.trace[i] = 0.0;
            s.in_active[i] = 0;
        }
        s.active.clear();
    }
    s.v_old = 0.0;
    s.trace_zero = true;
}

double predict(const LearnerState& s, const FeatureVector& phi) { return dot(s.theta, phi); }

TdLearner::TdLearner(TdConfig cfg, std::size_t n)
    : cfg_(std::move(cfg)), state_(LearnerState::make(cfg_, n)) {}

void TdLearner::reset() { state_ = LearnerState::make(cfg_, state_.dim()); }

std::string snapshot_json(const LearnerState& s) {
    nlohmann::json j;
    j["theta"] = s.theta.values();
    j["trace"] = s.trace;
    j["v_old"] = s.v_old;
    j["diverged"] = s.diverged;
    return j.dump();
}

void write_snapshot_csv(std::ostream& out, const LearnerState& s) {
    out << "index,theta,trace\n";
    out.precision(17);
    for (std::size_t i = 0; i < s.dim(); ++i) out << i << ',' << s.theta[i] << ',' << s.trace[i] << '\n';
    out << "# v_old=" << s.v_old << " diverged=" << (s.diverged ? 1 : 0) << '\n';
}

} // namespace tdkit
