#include "tdkit/mrp_suite.hpp"

#include "tdkit/error.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <vector>

namespace tdkit {

namespace {

constexpr std::size_t kMaxRedraws = 10'000;

void check_p(double p, const char* who) {
    if (!(p > 0.0 && p < 1.0)) throw ContractError(std::string(who) + ": p must be in (0, 1)");
}

std::vector<char> reachable(const Mrp& mrp, bool reverse) {
    std::vector<char> seen(mrp.k, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        const std::size_t s = stack.back();
        stack.pop_back();
        for (std::size_t t = 0; t < mrp.k; ++t) {
            const double p = reverse ? mrp.prob(t, s) : mrp.prob(s, t);
            if (p > 0.0 && !seen[t]) {
                seen[t] = 1;
                stack.push_back(t);
            }
        }
    }
    return seen;
}

Mrp draw_random_mrp(const RandomMrpSpec& spec, Rng& rng) {
    Mrp m = Mrp::zeros(spec.k);
    m.sigma = spec.sigma;
    m.gamma = spec.gamma;
    std::vector<std::size_t> states(spec.k);
    std::iota(states.begin(), states.end(), 0);
    std::vector<double> weights(spec.b);
    for (std::size_t s = 0; s < spec.k; ++s) {
        // partial Fisher-Yates: first b entries become the successors
        for (std::size_t j = 0; j < spec.b; ++j) {
            std::uniform_int_distribution<std::size_t> pick(j, spec.k - 1);
            std::swap(states[j], states[pick(rng)]);
        }
        double total = 0.0;
        for (double& w : weights) {
            w = 1.0 - uniform01(rng); // (0, 1]
            total += w;
        }
        for (std::size_t j = 0; j < spec.b; ++j) {
            m.prob(s, states[j]) = weights[j] / total;
            m.reward(s, states[j]) = standard_normal(rng);
        }
        // pin the row sum to exactly 1 on the last successor
        double rest = 0.0;
        for (std::size_t j = 0; j + 1 < spec.b; ++j) rest += m.prob(s, states[j]);
        m.prob(s, states[spec.b - 1]) = 1.0 - rest;
    }
    return m;
}

} // namespace

MrpInstance make_one_state(double p) {
    check_p(p, "make_one_state");
    Mrp m = Mrp::zeros(1);
    m.prob(0, 0) = p;
    m.reward(0, 0) = 0.0;
    m.p_terminal[0] = 1.0 - p;
    m.r_terminal[0] = 1.0;
    m.gamma = 1.0;
    m.validate();
    return {std::move(m), make_aliased_constant(1)};
}

MrpInstance make_two_state(double p) {
    check_p(p, "make_two_state");
    Mrp m = Mrp::zeros(2);
    m.prob(0, 1) = p;
    m.reward(0, 1) = 0.0;
    m.p_terminal[0] = 1.0 - p;
    m.r_terminal[0] = 0.0;
    m.p_terminal[1] = 1.0;
    m.r_terminal[1] = 1.0;
    m.gamma = 1.0;
    m.initial_state = 0;
    m.validate();
    return {std::move(m), make_aliased_constant(2)};
}

void RandomMrpSpec::validate() const {
    if (k == 0) throw ContractError("RandomMrpSpec: k must be >= 1");
    if (b < 1 || b > k) throw ContractError("RandomMrpSpec: need 1 <= b <= k");
    if (!(sigma >= 0.0)) throw ContractError("RandomMrpSpec: sigma must be >= 0");
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw ContractError("RandomMrpSpec: continuing processes need gamma in [0, 1)");
    }
}

RandomMrpSpec RandomMrpSpec::parse(const std::string& text) {
    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    std::istringstream in(normalized);
    RandomMrpSpec spec;
    if (!(in >> spec.k >> spec.b >> spec.sigma)) {
        throw ContractError("cannot parse MRP spec '" + text + "' (expected k,b,sigma)");
    }
    std::string rest;
    if (in >> rest) throw ContractError("trailing text in MRP spec '" + text + "'");
    return spec;
}

std::string RandomMrpSpec::label() const {
    std::ostringstream out;
    out << '(' << k << ", " << b << ", " << sigma << ')';
    return out.str();
}

bool strongly_connected(const Mrp& mrp) {
    const auto fwd = reachable(mrp, false);
    const auto bwd = reachable(mrp, true);
    for (std::size_t s = 0; s < mrp.k; ++s) {
        if (!fwd[s] || !bwd[s]) return false;
    }
    return true;
}

Mrp make_random_mrp(const RandomMrpSpec& spec, std::size_t* redraws) {
    spec.validate();
    for (std::size_t attempt = 0; attempt < kMaxRedraws; ++attempt) {
        Rng rng(derive_seed(spec.seed, attempt));
        Mrp m = draw_random_mrp(spec, rng);
        if (strongly_connected(m)) {
            if (redraws != nullptr) *redraws = attempt;
            m.validate();
            return m;
        }
    }
    throw NumericalError("make_random_mrp: no strongly connected draw for " + spec.label());
}

} // namespace tdkit
