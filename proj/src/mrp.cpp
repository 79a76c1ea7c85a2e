#include "tdkit/mrp.hpp"

#include "tdkit/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

namespace tdkit {

namespace {

constexpr double kRowSumTolerance = 1e-12;
constexpr double kSolveResidual = 1e-10;
constexpr double kPowerTolerance = 1e-14;
constexpr std::size_t kPowerIterationCap = 1'000'000;

/// Transition matrix of the chain that jumps back to the initial state
/// instead of terminating.
Eigen::MatrixXd restart_matrix(const Mrp& mrp) {
    const auto k = static_cast<Eigen::Index>(mrp.k);
    Eigen::MatrixXd q(k, k);
    for (Eigen::Index s = 0; s < k; ++s) {
        for (Eigen::Index t = 0; t < k; ++t) q(s, t) = mrp.prob(s, t);
        q(s, static_cast<Eigen::Index>(mrp.initial_state)) += mrp.p_terminal[s];
    }
    return q;
}

Eigen::MatrixXd feature_matrix(const Representation& rep) {
    Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(rep.num_states(), rep.dim());
    for (std::size_t s = 0; s < rep.num_states(); ++s) {
        rep.features(s).for_each([&](std::size_t i, double v) {
            phi(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i)) = v;
        });
    }
    return phi;
}

} // namespace

Mrp Mrp::zeros(std::size_t k) {
    Mrp m;
    m.k = k;
    m.P.assign(k * k, 0.0);
    m.p_terminal.assign(k, 0.0);
    m.r_mean.assign(k * k, 0.0);
    m.r_terminal.assign(k, 0.0);
    return m;
}

bool Mrp::episodic() const {
    return std::any_of(p_terminal.begin(), p_terminal.end(), [](double p) { return p > 0.0; });
}

double Mrp::expected_reward(std::size_t s) const {
    double r = p_terminal[s] * r_terminal[s];
    for (std::size_t t = 0; t < k; ++t) r += prob(s, t) * reward(s, t);
    return r;
}

void Mrp::validate() const {
    if (k == 0) throw ContractError("Mrp: k must be >= 1");
    if (P.size() != k * k || r_mean.size() != k * k || p_terminal.size() != k ||
        r_terminal.size() != k) {
        throw ContractError("Mrp: table sizes do not match k=" + std::to_string(k));
    }
    if (!(sigma >= 0.0)) throw ContractError("Mrp: sigma must be >= 0");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ContractError("Mrp: gamma must be in [0, 1]");
    if (initial_state >= k) throw ContractError("Mrp: initial_state out of range");
    for (std::size_t s = 0; s < k; ++s) {
        double sum = p_terminal[s];
        if (p_terminal[s] < 0.0) throw ContractError("Mrp: negative termination probability");
        for (std::size_t t = 0; t < k; ++t) {
            if (prob(s, t) < 0.0) throw ContractError("Mrp: negative transition probability");
            sum += prob(s, t);
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance) {
            throw ContractError("Mrp: row " + std::to_string(s) + " sums to " + std::to_string(sum));
        }
    }
    for (double r : r_mean) {
        if (!std::isfinite(r)) throw ContractError("Mrp: non-finite reward");
    }
    if (episodic()) {
        // backwards search from the states that can terminate
        std::vector<char> reaches(k, 0);
        std::deque<std::size_t> frontier;
        for (std::size_t s = 0; s < k; ++s) {
            if (p_terminal[s] > 0.0) {
                reaches[s] = 1;
                frontier.push_back(s);
            }
        }
        while (!frontier.empty()) {
            const std::size_t t = frontier.front();
            frontier.pop_front();
            for (std::size_t s = 0; s < k; ++s) {
                if (!reaches[s] && prob(s, t) > 0.0) {
                    reaches[s] = 1;
                    frontier.push_back(s);
                }
            }
        }
        for (std::size_t s = 0; s < k; ++s) {
            if (!reaches[s]) {
                throw ContractError("Mrp: termination unreachable from state " + std::to_string(s));
            }
        }
    }
}

Transition sample_transition(const Mrp& mrp, std::size_t s, Rng& rng) {
    if (s >= mrp.k) throw ContractError("sample_transition: state out of range");
    const double u = uniform01(rng);
    Transition tr;
    tr.s = s;
    double cumulative = 0.0;
    std::size_t last_nonzero = mrp.k;
    bool chosen = false;
    for (std::size_t t = 0; t < mrp.k; ++t) {
        const double p = mrp.prob(s, t);
        if (p <= 0.0) continue;
        last_nonzero = t;
        cumulative += p;
        if (u < cumulative) {
            tr.s_next = t;
            chosen = true;
            break;
        }
    }
    if (!chosen) {
        if (mrp.p_terminal[s] > 0.0 || last_nonzero == mrp.k) {
            tr.terminal = true;
        } else {
            // rounding left u above the cumulative sum
            tr.s_next = last_nonzero;
        }
    }
    const double mean = tr.terminal ? mrp.r_terminal[s] : mrp.reward(s, tr.s_next);
    tr.reward = mrp.sigma > 0.0 ? mean + mrp.sigma * standard_normal(rng) : mean;
    return tr;
}

ValueTable true_values(const Mrp& mrp) {
    const auto k = static_cast<Eigen::Index>(mrp.k);
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(k, k);
    Eigen::VectorXd rbar(k);
    for (Eigen::Index s = 0; s < k; ++s) {
        rbar(s) = mrp.expected_reward(static_cast<std::size_t>(s));
        for (Eigen::Index t = 0; t < k; ++t) a(s, t) -= mrp.gamma * mrp.prob(s, t);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) {
        throw NumericalError("true_values: Bellman system is singular (gamma = 1 without reachable "
                             "termination?)");
    }
    Eigen::VectorXd v = lu.solve(rbar);
    const double residual = (a * v - rbar).cwiseAbs().maxCoeff();
    if (!(residual <= kSolveResidual * std::max(1.0, v.cwiseAbs().maxCoeff()))) {
        throw NumericalError("true_values: residual " + std::to_string(residual) + " too large");
    }
    return {std::vector<double>(v.data(), v.data() + k)};
}

std::vector<double> state_distribution(const Mrp& mrp) {
    const auto k = static_cast<Eigen::Index>(mrp.k);
    const Eigen::MatrixXd q = restart_matrix(mrp);
    // Lazy chain (I + Q) / 2 has the same fixed point and is aperiodic.
    Eigen::RowVectorXd d = Eigen::RowVectorXd::Constant(k, 1.0 / static_cast<double>(k));
    for (std::size_t it = 0; it < kPowerIterationCap; ++it) {
        Eigen::RowVectorXd next = 0.5 * (d + d * q);
        next /= next.sum();
        const double change = (next - d).cwiseAbs().maxCoeff();
        d = next;
        if (change <= kPowerTolerance) return {d.data(), d.data() + k};
    }
    throw NumericalError("state_distribution: power iteration did not converge");
}

double stationarity_residual(const Mrp& mrp, const std::vector<double>& d) {
    const Eigen::MatrixXd q = restart_matrix(mrp);
    const Eigen::Map<const Eigen::RowVectorXd> dv(d.data(), static_cast<Eigen::Index>(d.size()));
    return (dv * q - dv).cwiseAbs().maxCoeff();
}

std::string_view to_string(Weighting w) {
    return w == Weighting::uniform ? "uniform" : "state_distribution";
}

Weighting parse_weighting(std::string_view name) {
    if (name == "uniform") return Weighting::uniform;
    if (name == "state_distribution" || name == "d") return Weighting::state_distribution;
    throw ContractError("unknown weighting '" + std::string(name) + "'");
}

std::vector<double> state_weights(const Mrp& mrp, Weighting weighting) {
    if (weighting == Weighting::uniform) {
        return std::vector<double>(mrp.k, 1.0 / static_cast<double>(mrp.k));
    }
    return state_distribution(mrp);
}

WeightVector lms_solution(const Representation& rep, const std::vector<double>& values,
                          const std::vector<double>& weights) {
    if (values.size() != rep.num_states() || weights.size() != rep.num_states()) {
        throw ContractError("lms_solution: value/weight tables do not match the representation");
    }
    const Eigen::MatrixXd phi = feature_matrix(rep);
    const auto k = static_cast<Eigen::Index>(rep.num_states());
    const Eigen::Map<const Eigen::VectorXd> w(weights.data(), k);
    const Eigen::Map<const Eigen::VectorXd> v(values.data(), k);
    const Eigen::MatrixXd weighted = w.asDiagonal() * phi;
    const Eigen::MatrixXd normal = phi.transpose() * weighted;
    const Eigen::VectorXd rhs = weighted.transpose() * v;
    const Eigen::VectorXd theta = normal.completeOrthogonalDecomposition().solve(rhs);
    return WeightVector(std::vector<double>(theta.data(), theta.data() + theta.size()));
}

WeightVector lms_solution(const Mrp& mrp, const Representation& rep, Weighting weighting) {
    if (rep.num_states() != mrp.k) throw ContractError("lms_solution: representation has wrong k");
    return lms_solution(rep, true_values(mrp).v, state_weights(mrp, weighting));
}

std::vector<double> state_predictions(const WeightVector& theta, const Representation& rep) {
    std::vector<double> out(rep.num_states());
    for (std::size_t s = 0; s < rep.num_states(); ++s) out[s] = dot(theta, rep.features(s));
    return out;
}

double weighted_mse(std::span<const double> theta, const Representation& rep,
                    const std::vector<double>& target, const std::vector<double>& weights) {
    double total = 0.0;
    for (std::size_t s = 0; s < rep.num_states(); ++s) {
        const double err = dot(theta, rep.features(s)) - target[s];
        total += weights[s] * err * err;
    }
    return total;
}

double rms_error(const WeightVector& theta, const Mrp& mrp, const Representation& rep,
                 Weighting weighting) {
    if (rep.num_states() != mrp.k) throw ContractError("rms_error: representation has wrong k");
    return std::sqrt(
        weighted_mse(theta.span(), rep, true_values(mrp).v, state_weights(mrp, weighting)));
}

} // namespace tdkit
