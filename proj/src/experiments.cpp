#include "tdkit/experiments.hpp"

#include "tdkit/error.hpp"
#include "tdkit/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace tdkit {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv_word(std::uint64_t h, std::uint64_t word) {
    for (int byte = 0; byte < 8; ++byte) {
        h ^= (word >> (8 * byte)) & 0xFFU;
        h *= kFnvPrime;
    }
    return h;
}

std::string fmt_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json variant_names(const std::vector<TdVariant>& methods) {
    json out = json::array();
    for (auto m : methods) out.push_back(std::string(to_string(m)));
    return out;
}

} // namespace

std::string_view to_string(StreamPurpose p) {
    switch (p) {
    case StreamPurpose::mrp_generation: return "mrp_generation";
    case StreamPurpose::representation: return "representation";
    case StreamPurpose::trajectory: return "trajectory";
    }
    return "unknown";
}

std::vector<double> default_lambdas() {
    return {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.975, 0.99, 1.0};
}

std::vector<double> default_alphas() {
    std::vector<double> out;
    for (int k = 12; k >= 0; --k) out.push_back(std::ldexp(1.0, -k));
    out.push_back(1.5);
    out.push_back(2.0);
    return out;
}

std::vector<TdVariant> all_variants() {
    return {TdVariant::accumulate, TdVariant::replace, TdVariant::true_online};
}

void SweepConfig::validate() const {
    if (alphas.empty() || lambdas.empty() || methods.empty()) {
        throw ContractError("SweepConfig: alphas, lambdas and methods must be non-empty");
    }
    for (double a : alphas) {
        if (!(a > 0.0)) throw ContractError("SweepConfig: every alpha must be > 0");
    }
    for (double l : lambdas) {
        if (!(l >= 0.0 && l <= 1.0)) throw ContractError("SweepConfig: lambdas must lie in [0, 1]");
    }
    if (std::find(lambdas.begin(), lambdas.end(), 0.0) == lambdas.end()) {
        throw ContractError("SweepConfig: lambdas must include 0 for normalisation");
    }
    if (runs == 0) throw ContractError("SweepConfig: runs must be >= 1");
    if (horizon == 0) throw ContractError("SweepConfig: horizon must be >= 1");
}

std::uint64_t hash_transitions(std::span<const Transition> transitions) {
    std::uint64_t h = kFnvOffset;
    for (const auto& tr : transitions) {
        h = fnv_word(h, tr.s);
        h = fnv_word(h, tr.terminal ? ~std::uint64_t{0} : tr.s_next);
        h = fnv_word(h, std::bit_cast<std::uint64_t>(tr.reward));
    }
    return h;
}

std::vector<Transition> sample_trajectory(const Mrp& mrp, std::size_t steps, Rng& rng) {
    std::vector<Transition> out;
    out.reserve(steps);
    std::size_t s = mrp.initial_state;
    for (std::size_t t = 0; t < steps; ++t) {
        out.push_back(sample_transition(mrp, s, rng));
        s = out.back().terminal ? mrp.initial_state : out.back().s_next;
    }
    return out;
}

std::vector<MethodSummary> aggregate_and_normalize(std::span<const MeanCell> cells) {
    std::vector<TdVariant> order;
    for (const auto& c : cells) {
        if (std::find(order.begin(), order.end(), c.method) == order.end()) order.push_back(c.method);
    }
    std::vector<MethodSummary> out;
    for (TdVariant m : order) {
        MethodSummary s;
        s.method = m;
        s.best_error = kInf;
        s.baseline_error = kInf;
        bool seen = false;
        bool has_zero = false;
        for (const auto& c : cells) {
            if (c.method != m) continue;
            const double e = c.diverged ? kInf : c.mean_error;
            if (!seen || e < s.best_error) {
                s.best_error = e;
                s.best_alpha = c.alpha;
                s.best_lambda = c.lambda;
                seen = true;
            }
            if (c.lambda == 0.0 && (!has_zero || e < s.baseline_error)) {
                s.baseline_error = e;
                s.baseline_alpha = c.alpha;
                has_zero = true;
            }
        }
        if (!has_zero) {
            throw ContractError("aggregate_and_normalize: no lambda = 0 cell for " +
                                std::string(to_string(m)));
        }
        if (s.best_error == s.baseline_error) {
            s.normalized = 1.0;
        } else {
            s.normalized = s.best_error / s.baseline_error;
        }
        out.push_back(s);
    }
    return out;
}

SweepResult run_sweep(const Mrp& mrp, const Representation& rep, const SweepConfig& cfg) {
    cfg.validate();
    if (rep.num_states() != mrp.k) throw ContractError("run_sweep: representation has wrong k");
    const bool wants_replace =
        std::find(cfg.methods.begin(), cfg.methods.end(), TdVariant::replace) != cfg.methods.end();
    if (wants_replace && !rep.is_binary()) {
        throw ContractError("run_sweep: replacing traces need a binary representation, got '" +
                            std::string(to_string(rep.kind())) + "'");
    }

    SweepResult result;
    result.config = cfg;
    const auto weights = state_distribution(mrp);
    const auto values = true_values(mrp).v;
    result.lms_theta = lms_solution(rep, values, weights);
    const auto lms_values = state_predictions(result.lms_theta, rep);

    const SeedPlan plan{cfg.master_seed};
    std::vector<std::vector<Transition>> trajectories(cfg.runs);
    for (std::size_t r = 0; r < cfg.runs; ++r) {
        Rng rng = plan.stream(r, StreamPurpose::trajectory);
        trajectories[r] = sample_trajectory(mrp, cfg.horizon, rng);
        result.trajectory_hashes.push_back(hash_transitions(trajectories[r]));
    }

    const std::size_t na = cfg.alphas.size();
    const std::size_t nl = cfg.lambdas.size();
    const std::size_t nr = cfg.runs;
    const std::size_t total = cfg.methods.size() * na * nl * nr;
    result.cells.resize(total);

    parallel_for(total, cfg.threads, [&](std::size_t idx) {
        const std::size_t r = idx % nr;
        const std::size_t l = (idx / nr) % nl;
        const std::size_t a = (idx / (nr * nl)) % na;
        const std::size_t m = idx / (nr * nl * na);

        SweepCell cell;
        cell.method = cfg.methods[m];
        cell.alpha = cfg.alphas[a];
        cell.lambda = cfg.lambdas[l];
        cell.run = r;
        const auto& traj = trajectories[r];
        cell.stream_hash = hash_transitions(traj);

        TdConfig td;
        td.alpha = cell.alpha;
        td.lambda = cell.lambda;
        td.gamma = mrp.gamma;
        td.variant = cell.method;
        LearnerState state = LearnerState::make(td, rep.dim());
        start_episode(state);

        double sum = 0.0;
        double mse = 0.0;
        for (const auto& tr : traj) {
            const FeatureVector& phi = rep.features(tr.s);
            const FeatureVector& phi_next = tr.terminal ? phi : rep.features(tr.s_next);
            step(state, td, phi, tr.reward, phi_next, tr.terminal);
            if (tr.terminal) start_episode(state);
            if (state.diverged) break;
            mse = weighted_mse(state.theta.span(), rep, lms_values, weights);
            if (!std::isfinite(mse)) {
                state.diverged = true;
                break;
            }
            sum += mse;
        }
        cell.diverged = state.diverged;
        cell.raw_error = cell.diverged ? kInf : sum / static_cast<double>(traj.size());
        cell.final_error = cell.diverged ? kInf : mse;
        result.cells[idx] = cell;
    });

    result.means.reserve(cfg.methods.size() * na * nl);
    for (std::size_t base = 0; base < total; base += nr) {
        MeanCell mc;
        mc.method = result.cells[base].method;
        mc.alpha = result.cells[base].alpha;
        mc.lambda = result.cells[base].lambda;
        double sum = 0.0;
        for (std::size_t r = 0; r < nr; ++r) {
            const auto& c = result.cells[base + r];
            mc.diverged = mc.diverged || c.diverged;
            sum += c.raw_error;
        }
        mc.mean_error = mc.diverged ? kInf : sum / static_cast<double>(nr);
        result.means.push_back(mc);
    }
    result.summary = aggregate_and_normalize(result.means);
    return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    out << "method,alpha,lambda,run,raw_error,diverged\n";
    for (const auto& c : result.cells) {
        out << to_string(c.method) << ',' << fmt_double(c.alpha) << ',' << fmt_double(c.lambda) << ','
            << c.run << ',' << fmt_double(c.raw_error) << ',' << (c.diverged ? 1 : 0) << '\n';
    }
}

json sweep_summary_json(const SweepResult& result) {
    const auto& cfg = result.config;
    json j;
    j["config"] = {
        {"alphas", cfg.alphas},
        {"lambdas", cfg.lambdas},
        {"methods", variant_names(cfg.methods)},
        {"runs", cfg.runs},
        {"horizon", cfg.horizon},
        {"master_seed", cfg.master_seed},
        {"metric", "d-weighted MSE vs LMS, averaged over the horizon"},
        {"theta_init", 0.0},
    };
    const SeedPlan plan{cfg.master_seed};
    json streams = json::array();
    for (std::size_t r = 0; r < cfg.runs; ++r) {
        streams.push_back({{"run", r},
                           {"trajectory_seed", plan.seed_for(r, StreamPurpose::trajectory)},
                           {"trajectory_hash", result.trajectory_hashes.at(r)}});
    }
    j["seed_plan"] = {{"master_seed", cfg.master_seed}, {"streams", streams}};
    j["lms_theta"] = result.lms_theta.values();
    json methods = json::array();
    for (const auto& s : result.summary) {
        methods.push_back({
            {"method", std::string(to_string(s.method))},
            {"best_error", finite_or_null(s.best_error)},
            {"best_alpha", s.best_alpha},
            {"best_lambda", s.best_lambda},
            {"baseline_error", finite_or_null(s.baseline_error)},
            {"baseline_alpha", s.baseline_alpha},
            {"normalized", finite_or_null(s.normalized)},
        });
    }
    j["summary"] = methods;
    json means = json::array();
    for (const auto& m : result.means) {
        means.push_back({{"method", std::string(to_string(m.method))},
                         {"alpha", m.alpha},
                         {"lambda", m.lambda},
                         {"mean_error", finite_or_null(m.mean_error)},
                         {"diverged", m.diverged}});
    }
    j["means"] = means;
    return j;
}

std::vector<RandomMrpSpec> benchmark_domains(double gamma) {
    return {
        {10, 3, 0.1, 0, gamma},
        {100, 10, 0.1, 0, gamma},
        {100, 3, 0.0, 0, gamma},
    };
}

Representation build_representation(RepKind kind, std::size_t k, std::uint64_t seed) {
    switch (kind) {
    case RepKind::tabular: return make_tabular(k);
    case RepKind::binary: return make_binary(k);
    case RepKind::normal: {
        Rng rng(seed);
        return make_normal(k, rng);
    }
    case RepKind::aliased_constant: return make_aliased_constant(k);
    }
    throw ContractError("build_representation: unknown kind");
}

std::vector<ComboResult> run_benchmark_table(const std::vector<RandomMrpSpec>& domains,
                                             const std::vector<RepKind>& reps, SweepConfig base,
                                             bool fixed_horizon) {
    std::vector<ComboResult> out;
    const std::uint64_t master = base.master_seed;
    for (std::size_t i = 0; i < domains.size(); ++i) {
        RandomMrpSpec spec = domains[i];
        spec.seed = derive_seed(master, i, static_cast<std::uint64_t>(StreamPurpose::mrp_generation));
        std::size_t redraws = 0;
        const Mrp mrp = make_random_mrp(spec, &redraws);
        for (RepKind kind : reps) {
            const auto rep = build_representation(
                kind, spec.k,
                derive_seed(master, i, static_cast<std::uint64_t>(StreamPurpose::representation)));
            SweepConfig cfg = base;
            // every representation of a domain replays the same trajectories
            cfg.master_seed = derive_seed(master, i);
            if (!fixed_horizon) cfg.horizon = spec.k <= 10 ? 100 : 1000;
            if (!rep.is_binary()) {
                std::erase(cfg.methods, TdVariant::replace);
            }
            out.push_back({spec, kind, redraws, run_sweep(mrp, rep, cfg)});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<OneStatePoint> run_challenge_one_state(const OneStateConfig& cfg) {
    const auto inst = make_one_state(cfg.p);
    const auto values = true_values(inst.mrp).v;
    const std::vector<double> weights{1.0};
    const FeatureVector& phi = inst.rep.features(0);

    std::vector<OneStatePoint> out;
    for (TdVariant method : cfg.methods) {
        for (double alpha : cfg.alphas) {
            OneStatePoint pt;
            pt.method = method;
            pt.alpha = alpha;
            double sum = 0.0;
            for (std::size_t run = 0; run < cfg.runs; ++run) {
                Rng rng(derive_seed(cfg.seed, run, static_cast<std::uint64_t>(StreamPurpose::trajectory)));
                TdConfig td;
                td.alpha = alpha;
                td.lambda = cfg.lambda;
                td.gamma = inst.mrp.gamma;
                td.variant = method;
                LearnerState state = LearnerState::make(td, 1);
                for (std::size_t ep = 0; ep < cfg.episodes; ++ep) {
                    double err = kInf;
                    if (!state.diverged) {
                        start_episode(state);
                        for (;;) {
                            const Transition tr = sample_transition(inst.mrp, 0, rng);
                            step(state, td, phi, tr.reward, phi, tr.terminal);
                            if (tr.terminal || state.diverged) break;
                        }
                        if (!state.diverged) {
                            err = std::sqrt(weighted_mse(state.theta.span(), inst.rep, values, weights));
                        }
                    }
                    pt.diverged = pt.diverged || state.diverged;
                    pt.max_error = std::max(pt.max_error, err);
                    sum += err;
                }
            }
            pt.mean_error = sum / static_cast<double>(cfg.runs * cfg.episodes);
            out.push_back(pt);
        }
    }
    return out;
}

TwoStateResult run_challenge_two_state(const TwoStateConfig& cfg) {
    if (cfg.window == 0) throw ContractError("TwoStateConfig: window must be >= 1");
    const auto inst = make_two_state(cfg.p);
    const auto values = true_values(inst.mrp).v;
    const auto weights = state_distribution(inst.mrp);
    const FeatureVector& phi = inst.rep.features(0);

    TwoStateResult result;
    result.lms_theta = lms_solution(inst.rep, values, weights)[0];
    result.lms_error = std::sqrt(
        weighted_mse(std::span<const double>(&result.lms_theta, 1), inst.rep, values, weights));

    for (TdVariant method : cfg.methods) {
        for (double lambda : cfg.lambdas) {
            TwoStatePoint pt;
            pt.method = method;
            pt.lambda = lambda;
            double err_sum = 0.0;
            double step_sum = 0.0;
            for (std::size_t run = 0; run < cfg.runs; ++run) {
                Rng rng(derive_seed(cfg.seed, run, static_cast<std::uint64_t>(StreamPurpose::trajectory)));
                TdConfig td;
                td.alpha = cfg.alpha;
                td.lambda = lambda;
                td.gamma = inst.mrp.gamma;
                td.variant = method;
                LearnerState state = LearnerState::make(td, 1);
                start_episode(state);

                std::size_t s = inst.mrp.initial_state;
                double err = kInf;
                double prev_window = kInf;
                double window_sum = 0.0;
                double theta_sum = 0.0;
                bool converged = false;
                std::size_t t = 0;
                while (t < cfg.step_cap) {
                    const Transition tr = sample_transition(inst.mrp, s, rng);
                    step(state, td, phi, tr.reward, phi, tr.terminal);
                    if (tr.terminal) {
                        start_episode(state);
                        s = inst.mrp.initial_state;
                    } else {
                        s = tr.s_next;
                    }
                    if (state.diverged) {
                        err = kInf;
                        break;
                    }
                    window_sum += std::sqrt(weighted_mse(state.theta.span(), inst.rep, values, weights));
                    theta_sum += state.theta[0];
                    ++t;
                    if (t % cfg.window == 0) {
                        const double window_err = window_sum / static_cast<double>(cfg.window);
                        const double theta_bar = theta_sum / static_cast<double>(cfg.window);
                        err = std::sqrt(weighted_mse(std::span<const double>(&theta_bar, 1), inst.rep, values, weights));
                        if (std::abs(window_err - prev_window) < cfg.tolerance * prev_window) {
                            converged = true;
                            break;
                        }
                        prev_window = window_err;
                        window_sum = 0.0;
                        theta_sum = 0.0;
                    }
                }
                pt.all_converged = pt.all_converged && converged;
                err_sum += err;
                step_sum += static_cast<double>(t);
            }
            pt.error = err_sum / static_cast<double>(cfg.runs);
            pt.mean_steps = step_sum / static_cast<double>(cfg.runs);
            result.points.push_back(pt);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------

NextingSweepResult run_nexting_sweep(const SignalSet& data, const TileCoderConfig& coder_cfg,
                                     const GvfSpec& gvf, const NextingSweepConfig& cfg) {
    gvf.validate(data.num_channels());
    if (std::find(cfg.lambdas.begin(), cfg.lambdas.end(), 0.0) == cfg.lambdas.end()) {
        throw ContractError("run_nexting_sweep: lambdas must include 0 for normalisation");
    }
    const TileCoder coder(coder_cfg);
    const auto features = encode_all(data, coder);
    const auto target = data.channel(gvf.target_channel);
    const auto returns = compute_returns(target, gvf.gamma);

    const std::size_t na = cfg.alphas.size();
    const std::size_t nl = cfg.lambdas.size();
    NextingSweepResult result;
    result.cells.resize(cfg.methods.size() * na * nl);
    parallel_for(result.cells.size(), cfg.threads, [&](std::size_t idx) {
        const std::size_t l = idx % nl;
        const std::size_t a = (idx / nl) % na;
        const std::size_t m = idx / (nl * na);
        TdConfig td;
        td.alpha = cfg.alphas[a];
        td.lambda = cfg.lambdas[l];
        td.gamma = gvf.gamma;
        td.variant = cfg.methods[m];
        td.trace_cutoff = cfg.trace_cutoff;
        const auto run = run_nexting(features, target, returns, td, false);
        result.cells[idx] = {td.variant, td.alpha, td.lambda, run.mean_abs_error, run.diverged};
    });

    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
        std::vector<NextingCurvePoint> curve;
        for (std::size_t l = 0; l < nl; ++l) {
            NextingCurvePoint pt;
            pt.method = cfg.methods[m];
            pt.lambda = cfg.lambdas[l];
            pt.best_error = kInf;
            for (std::size_t a = 0; a < na; ++a) {
                const auto& c = result.cells[(m * na + a) * nl + l];
                if (c.mean_error < pt.best_error) {
                    pt.best_error = c.mean_error;
                    pt.best_alpha = c.alpha;
                }
            }
            curve.push_back(pt);
        }
        double baseline = kInf;
        for (const auto& pt : curve) {
            if (pt.lambda == 0.0) baseline = pt.best_error;
        }
        if (m == 0) result.baseline_error = baseline;
        for (auto& pt : curve) {
            pt.normalized = pt.best_error == baseline ? 1.0 : pt.best_error / baseline;
            result.curve.push_back(pt);
        }
    }
    return result;
}

} // namespace tdkit
