#pragma once

#include "tdkit/linear.hpp"
#include "tdkit/representation.hpp"
#include "tdkit/rng.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace tdkit {

/// Finite Markov reward process over k non-terminal states. Termination is
/// an absorbing pseudo-state: each state has a probability p_terminal[s] of
/// ending the episode, with expected reward r_terminal[s].
struct Mrp {
    std::size_t k = 0;
    std::vector<double> P;          ///< k x k, row-major
    std::vector<double> p_terminal; ///< k
    std::vector<double> r_mean;     ///< k x k, expected reward of s -> s'
    std::vector<double> r_terminal; ///< k
    double sigma = 0.0;             ///< reward noise std
    double gamma = 1.0;
    std::size_t initial_state = 0;

    /// All-zero process with k states (callers fill in the tables).
    static Mrp zeros(std::size_t k);

    double prob(std::size_t s, std::size_t s_next) const { return P[s * k + s_next]; }
    double& prob(std::size_t s, std::size_t s_next) { return P[s * k + s_next]; }
    double reward(std::size_t s, std::size_t s_next) const { return r_mean[s * k + s_next]; }
    double& reward(std::size_t s, std::size_t s_next) { return r_mean[s * k + s_next]; }

    bool episodic() const;
    /// Expected one-step reward from s.
    double expected_reward(std::size_t s) const;

    /// Checks table shapes, row sums (1e-12), sigma, gamma, and for episodic
    /// processes that termination is reachable from every state.
    void validate() const;

    friend bool operator==(const Mrp&, const Mrp&) = default;
};

struct Transition {
    std::size_t s = 0;
    std::size_t s_next = 0; ///< meaningless when terminal
    double reward = 0.0;
    bool terminal = false;
};

Transition sample_transition(const Mrp& mrp, std::size_t s, Rng& rng);

struct ValueTable {
    std::vector<double> v;
};

/// Solves v = rbar + gamma P v (termination contributes value 0).
ValueTable true_values(const Mrp& mrp);

/// Continuing: stationary distribution of P. Episodic: stationary
/// distribution of the chain that restarts at initial_state on termination,
/// i.e. normalised expected visits per episode.
std::vector<double> state_distribution(const Mrp& mrp);

/// max_j |(d' P_restart)_j - d_j|
double stationarity_residual(const Mrp& mrp, const std::vector<double>& d);

enum class Weighting { state_distribution, uniform };
std::string_view to_string(Weighting w);
Weighting parse_weighting(std::string_view name);

std::vector<double> state_weights(const Mrp& mrp, Weighting weighting);

/// argmin_theta sum_s w(s) (theta' phi(s) - v(s))^2, minimum-norm when the
/// weighted feature matrix is rank deficient.
WeightVector lms_solution(const Mrp& mrp, const Representation& rep,
                          Weighting weighting = Weighting::state_distribution);
WeightVector lms_solution(const Representation& rep, const std::vector<double>& values,
                          const std::vector<double>& weights);

/// sqrt(sum_s w(s) (theta' phi(s) - v(s))^2)
double rms_error(const WeightVector& theta, const Mrp& mrp, const Representation& rep,
                 Weighting weighting = Weighting::state_distribution);
/// sum_s w(s) (theta' phi(s) - target(s))^2
double weighted_mse(std::span<const double> theta, const Representation& rep,
                    const std::vector<double>& target, const std::vector<double>& weights);

/// Per-state predictions theta' phi(s).
std::vector<double> state_predictions(const WeightVector& theta, const Representation& rep);

} // namespace tdkit
