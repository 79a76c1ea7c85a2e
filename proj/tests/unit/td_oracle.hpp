#pragma once

// Test-only reference learners written straight from the update equations
// with plain loops over dense vectors. The true-online reference uses the
// explicit theta_{t-1}' phi_t form of the correction term, not v_old.

#include "tdkit/linear.hpp"
#include "tdkit/td_learner.hpp"

#include <random>
#include <vector>

namespace oracle {

struct Step {
    tdkit::FeatureVector phi;
    double reward;
    tdkit::FeatureVector phi_next;
    bool terminal;
};

inline double inner(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

struct RefLearner {
    tdkit::TdVariant variant;
    double alpha, lambda, gamma;
    std::vector<double> theta, e, theta_prev;
    bool first = true;

    RefLearner(tdkit::TdVariant v, double a, double l, double g, std::size_t n)
        : variant(v), alpha(a), lambda(l), gamma(g), theta(n, 0.0), e(n, 0.0), theta_prev(n, 0.0) {}

    void start_episode() {
        std::fill(e.begin(), e.end(), 0.0);
        first = true;
    }

    double step(const Step& s) {
        const auto phi = s.phi.to_dense();
        const double v = inner(theta, phi);
        const double v_next = s.terminal ? 0.0 : inner(theta, s.phi_next.to_dense());
        const double delta = s.reward + gamma * v_next - v;
        const std::size_t n = theta.size();
        std::vector<double> new_theta = theta;
        switch (variant) {
        case tdkit::TdVariant::accumulate:
            for (std::size_t i = 0; i < n; ++i) e[i] = gamma * lambda * e[i] + phi[i];
            for (std::size_t i = 0; i < n; ++i) new_theta[i] += alpha * delta * e[i];
            break;
        case tdkit::TdVariant::replace:
            for (std::size_t i = 0; i < n; ++i) e[i] = phi[i] == 1.0 ? 1.0 : gamma * lambda * e[i];
            for (std::size_t i = 0; i < n; ++i) new_theta[i] += alpha * delta * e[i];
            break;
        case tdkit::TdVariant::true_online: {
            const double e_phi = inner(e, phi);
            for (std::size_t i = 0; i < n; ++i) {
                e[i] = gamma * lambda * e[i] + phi[i] - alpha * gamma * lambda * e_phi * phi[i];
            }
            const double v_prev = first ? 0.0 : inner(theta_prev, phi);
            for (std::size_t i = 0; i < n; ++i) {
                new_theta[i] += alpha * delta * e[i] + alpha * (v - v_prev) * (e[i] - phi[i]);
            }
            break;
        }
        }
        theta_prev = theta;
        theta = new_theta;
        first = false;
        return delta;
    }
};

/// Random transition stream over n features. binary=true gives 0/1 sparse
/// vectors, otherwise dense normal vectors. Episodes end with probability
/// p_end per step.
inline std::vector<Step> random_stream(std::size_t n, std::size_t steps, bool binary,
                                       std::uint64_t seed, double p_end = 0.1) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif;
    auto draw = [&] {
        if (binary) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < n; ++i) {
                if (unif(rng) < 0.4) idx.push_back(i);
            }
            if (idx.empty()) idx.push_back(rng() % n);
            return tdkit::FeatureVector::binary(n, idx);
        }
        std::vector<double> v(n);
        for (double& x : v) x = normal(rng) / std::sqrt(static_cast<double>(n));
        return tdkit::FeatureVector::dense(v);
    };
    std::vector<Step> out;
    auto phi = draw();
    for (std::size_t t = 0; t < steps; ++t) {
        auto next = draw();
        const bool terminal = unif(rng) < p_end;
        out.push_back({phi, normal(rng), next, terminal});
        phi = terminal ? draw() : next;
    }
    return out;
}

} // namespace oracle
