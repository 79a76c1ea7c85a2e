// tdkit command-line tool: instance generation, experiments and plot data.

#include "tdkit/archive.hpp"
#include "tdkit/error.hpp"
#include "tdkit/experiments.hpp"
#include "tdkit/linear.hpp"
#include "tdkit/mrp_suite.hpp"
#include "tdkit/nexting.hpp"
#include "tdkit/td_learner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace tdkit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string num(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Short form for file names: 0.1 -> "0.1", 10 -> "10".
std::string tag(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::uint64_t effective_seed(std::uint64_t flag) {
    if (const char* env = std::getenv("TDKIT_SEED"); env != nullptr && *env != '\0') {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ContractError(std::string("TDKIT_SEED is not an unsigned integer: '") + env + "'");
        }
    }
    return flag;
}

std::vector<TdVariant> parse_methods(const std::string& text) {
    if (text == "all") return all_variants();
    std::vector<TdVariant> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_variant(item));
    if (out.empty()) throw ContractError("--methods: empty list");
    return out;
}

std::string domain_tag(const RandomMrpSpec& spec) {
    return std::to_string(spec.k) + "-" + std::to_string(spec.b) + "-" + tag(spec.sigma);
}

void write_json(const fs::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

// ---------------------------------------------------------------------------

struct GenMrpArgs {
    std::size_t k = 10;
    std::size_t b = 3;
    double sigma = 0.1;
    double gamma = 0.99;
    std::uint64_t seed = 0;
    std::string rep;
    std::string out;
};

int cmd_gen_mrp(const GenMrpArgs& a) {
    RandomMrpSpec spec{a.k, a.b, a.sigma, effective_seed(a.seed), a.gamma};
    std::size_t redraws = 0;
    MrpArchive archive;
    archive.mrp = make_random_mrp(spec, &redraws);
    if (!a.rep.empty()) {
        archive.rep = build_representation(
            parse_rep_kind(a.rep), spec.k,
            derive_seed(spec.seed, 0, static_cast<std::uint64_t>(StreamPurpose::representation)));
    }
    archive.meta = {{"generator", "random"}, {"k", spec.k},       {"b", spec.b},
                    {"sigma", spec.sigma},   {"seed", spec.seed}, {"redraws", redraws}};
    write_archive(a.out, archive);
    std::cout << "states " << spec.k << ", branching " << spec.b << ", irreducibility redraws "
              << redraws << "\nwrote " << a.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct ChallengeArgs {
    std::string which;
    double p = 0.5;
    std::size_t runs = 0;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
};

int cmd_challenge(const ChallengeArgs& a) {
    const std::uint64_t seed = effective_seed(a.seed);
    const fs::path dir(a.out_dir);
    if (a.which == "one-state") {
        OneStateConfig cfg;
        cfg.p = a.p;
        cfg.seed = seed;
        if (a.runs > 0) cfg.runs = a.runs;
        const auto pts = run_challenge_one_state(cfg);
        std::ostringstream csv;
        csv << "alpha";
        for (auto m : cfg.methods) csv << ',' << to_string(m);
        csv << '\n';
        for (std::size_t i = 0; i < cfg.alphas.size(); ++i) {
            csv << num(cfg.alphas[i]);
            for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
                csv << ',' << num(pts[m * cfg.alphas.size() + i].mean_error);
            }
            csv << '\n';
        }
        const auto path = dir / ("challenge-one-state-seed" + std::to_string(seed) + ".csv");
        write_text_file(path, csv.str());
        json meta = {{"experiment", "one-state"}, {"p", cfg.p},       {"lambda", cfg.lambda},
                     {"episodes", cfg.episodes},  {"runs", cfg.runs}, {"seed", seed},
                     {"alphas", cfg.alphas},      {"metric", "end-of-episode RMS error"}};
        write_json(dir / ("challenge-one-state-seed" + std::to_string(seed) + ".json"), meta);
        std::cout << "wrote " << path.string() << "\n";
        return 0;
    }
    if (a.which == "two-state") {
        TwoStateConfig cfg;
        cfg.p = a.p;
        cfg.seed = seed;
        if (a.runs > 0) cfg.runs = a.runs;
        const auto r = run_challenge_two_state(cfg);
        std::ostringstream csv;
        csv << "lambda";
        for (auto m : cfg.methods) csv << ',' << to_string(m);
        csv << ",lms_floor\n";
        for (std::size_t i = 0; i < cfg.lambdas.size(); ++i) {
            csv << num(cfg.lambdas[i]);
            for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
                csv << ',' << num(r.points[m * cfg.lambdas.size() + i].error);
            }
            csv << ',' << num(r.lms_error) << '\n';
        }
        const auto path = dir / ("challenge-two-state-seed" + std::to_string(seed) + ".csv");
        write_text_file(path, csv.str());
        json points = json::array();
        for (const auto& pt : r.points) {
            points.push_back({{"method", std::string(to_string(pt.method))},
                              {"lambda", pt.lambda},
                              {"error", finite_or_null(pt.error)},
                              {"mean_steps", pt.mean_steps},
                              {"all_converged", pt.all_converged}});
        }
        json meta = {{"experiment", "two-state"}, {"p", cfg.p},           {"alpha", cfg.alpha},
                     {"window", cfg.window},      {"tolerance", cfg.tolerance},
                     {"step_cap", cfg.step_cap},  {"runs", cfg.runs},     {"seed", seed},
                     {"lms_theta", r.lms_theta},  {"lms_error", r.lms_error}, {"points", points}};
        write_json(dir / ("challenge-two-state-seed" + std::to_string(seed) + ".json"), meta);
        std::cout << "wrote " << path.string() << "\n";
        return 0;
    }
    throw ContractError("--which must be one-state or two-state, got '" + a.which + "'");
}

// ---------------------------------------------------------------------------

struct SweepArgs {
    std::string mrp;
    std::string rep = "tabular";
    bool batch = false;
    std::string methods = "all";
    std::size_t runs = 50;
    std::size_t horizon = 0;
    double gamma = 0.99;
    std::uint64_t seed = 0;
    std::size_t threads = 0;
    std::string out_dir = ".";
};

json combo_json(const ComboResult& c, const std::string& id) {
    json j = sweep_summary_json(c.sweep);
    j["experiment"] = id;
    j["domain"] = {{"k", c.domain.k},         {"b", c.domain.b},         {"sigma", c.domain.sigma},
                   {"gamma", c.domain.gamma}, {"seed", c.domain.seed},   {"redraws", c.redraws}};
    j["representation"] = std::string(to_string(c.rep));
    return j;
}

void write_combo(const fs::path& dir, const ComboResult& c, const std::string& id) {
    std::ostringstream csv;
    write_sweep_csv(csv, c.sweep);
    write_text_file(dir / (id + ".csv"), csv.str());
    write_json(dir / (id + ".json"), combo_json(c, id));
}

int cmd_sweep(const SweepArgs& a) {
    const std::uint64_t seed = effective_seed(a.seed);
    const fs::path dir(a.out_dir);
    SweepConfig base;
    base.runs = a.runs;
    base.horizon = a.horizon == 0 ? 100 : a.horizon;
    base.master_seed = seed;
    base.threads = a.threads;
    const bool explicit_methods = a.methods != "all";
    base.methods = parse_methods(a.methods);

    if (a.batch) {
        const std::vector<RepKind> reps{RepKind::tabular, RepKind::binary, RepKind::normal};
        const auto table = run_benchmark_table(benchmark_domains(a.gamma), reps, base, a.horizon != 0);
        std::ostringstream summary;
        summary << "domain,representation,method,normalized,best_error,best_alpha,best_lambda,"
                   "baseline_error\n";
        json all = json::array();
        for (const auto& c : table) {
            const std::string id =
                "sweep-" + domain_tag(c.domain) + "-" + std::string(to_string(c.rep)) + "-seed" + std::to_string(seed);
            write_combo(dir, c, id);
            for (const auto& s : c.sweep.summary) {
                summary << '"' << c.domain.label() << '"' << ',' << to_string(c.rep) << ','
                        << to_string(s.method) << ',' << num(s.normalized) << ',' << num(s.best_error)
                        << ',' << num(s.best_alpha) << ',' << num(s.best_lambda) << ','
                        << num(s.baseline_error) << '\n';
            }
            all.push_back(id);
        }
        const std::string id = "sweep-table-seed" + std::to_string(seed);
        write_text_file(dir / (id + ".csv"), summary.str());
        std::cout << summary.str() << "wrote " << (dir / (id + ".csv")).string() << "\n";
        return 0;
    }

    if (a.mrp.empty()) throw ContractError("--mrp is required unless --batch is given");
    const RepKind kind = parse_rep_kind(a.rep);
    if (kind == RepKind::normal) {
        if (explicit_methods) {
            for (auto m : base.methods) {
                if (m == TdVariant::replace) {
                    throw ContractError("replacing traces need binary features; --rep normal is not binary");
                }
            }
        } else {
            std::erase(base.methods, TdVariant::replace);
        }
    }

    if (fs::exists(a.mrp)) {
        const auto archive = read_archive(a.mrp);
        const auto rep = archive.rep && archive.rep->kind() == kind
                             ? *archive.rep
                             : build_representation(kind, archive.mrp.k,
                                                    derive_seed(seed, 0, static_cast<std::uint64_t>(StreamPurpose::representation)));
        if (a.horizon == 0) base.horizon = archive.mrp.k <= 10 ? 100 : 1000;
        ComboResult c{RandomMrpSpec{archive.mrp.k, 0, archive.mrp.sigma, 0, archive.mrp.gamma}, kind, 0,
                      run_sweep(archive.mrp, rep, base)};
        const std::string id = "sweep-" + fs::path(a.mrp).stem().string() + "-" + a.rep + "-seed" + std::to_string(seed);
        write_combo(dir, c, id);
        for (const auto& s : c.sweep.summary) {
            std::cout << to_string(s.method) << " normalized " << num(s.normalized) << "\n";
        }
        std::cout << "wrote " << (dir / (id + ".csv")).string() << "\n";
        return 0;
    }

    RandomMrpSpec spec = RandomMrpSpec::parse(a.mrp);
    spec.gamma = a.gamma;
    auto table = run_benchmark_table({spec}, {kind}, base, a.horizon != 0);
    const auto& c = table.front();
    const std::string id = "sweep-" + domain_tag(c.domain) + "-" + a.rep + "-seed" + std::to_string(seed);
    write_combo(dir, c, id);
    for (const auto& s : c.sweep.summary) {
        std::cout << to_string(s.method) << " normalized " << num(s.normalized) << "\n";
    }
    std::cout << "wrote " << (dir / (id + ".csv")).string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct NextingArgs {
    std::string data;
    bool synth = false;
    std::size_t steps = 10000;
    std::string target = "position";
    double gamma = 0.97;
    std::uint64_t seed = 0;
    std::size_t threads = 0;
    std::string out_dir = ".";
};

int cmd_nexting(const NextingArgs& a) {
    const std::uint64_t seed = effective_seed(a.seed);
    if (a.data.empty() == !a.synth) throw ContractError("give exactly one of --data <csv> or --synth");
    const SignalSet data = a.synth ? synth_signals("arm", a.steps, seed) : load_signals(a.data);

    GvfSpec gvf;
    gvf.gamma = a.gamma;
    gvf.target_channel = data.channel_index(a.target);
    TileCoderConfig coder;
    coder.num_signals = data.num_channels();
    NextingSweepConfig cfg;
    cfg.threads = a.threads;
    const auto r = run_nexting_sweep(data, coder, gvf, cfg);

    std::ostringstream csv;
    csv << "lambda";
    for (auto m : cfg.methods) csv << ',' << to_string(m);
    for (auto m : cfg.methods) csv << ',' << to_string(m) << "_alpha";
    csv << '\n';
    const std::size_t nl = cfg.lambdas.size();
    for (std::size_t l = 0; l < nl; ++l) {
        csv << num(cfg.lambdas[l]);
        for (std::size_t m = 0; m < cfg.methods.size(); ++m) csv << ',' << num(r.curve[m * nl + l].normalized);
        for (std::size_t m = 0; m < cfg.methods.size(); ++m) csv << ',' << num(r.curve[m * nl + l].best_alpha);
        csv << '\n';
    }

    const std::string source = a.synth ? "synth" : fs::path(a.data).stem().string();
    const std::string id = "nexting-" + source + "-" + a.target + "-seed" + std::to_string(seed);
    const fs::path dir(a.out_dir);
    write_text_file(dir / (id + ".csv"), csv.str());

    json curve = json::array();
    for (const auto& pt : r.curve) {
        curve.push_back({{"method", std::string(to_string(pt.method))},
                         {"lambda", pt.lambda},
                         {"best_alpha", pt.best_alpha},
                         {"best_error", finite_or_null(pt.best_error)},
                         {"normalized", finite_or_null(pt.normalized)}});
    }
    json methods = json::array();
    for (auto m : cfg.methods) methods.push_back(std::string(to_string(m)));
    json j;
    j["experiment"] = id;
    j["config"] = {
        {"source", a.synth ? "synth:arm" : a.data},
        {"steps", data.size()},
        {"channels", data.channels},
        {"target", a.target},
        {"gamma", gvf.gamma},
        {"seed", seed},
        {"alphas", cfg.alphas},
        {"lambdas", cfg.lambdas},
        {"methods", methods},
        {"trace_cutoff", cfg.trace_cutoff},
        {"tile_coder",
         {{"bins_per_signal", coder.bins_per_signal},
          {"num_tilings", coder.num_tilings},
          {"hash_size", coder.hash_size},
          {"include_bias", coder.include_bias},
          {"seed", coder.seed}}},
        {"metric", "mean absolute return error over all steps, normalised by the lambda = 0 best-alpha error"},
    };
    j["normalization"] = {{"min", data.min}, {"max", data.max}};
    j["baseline_error"] = finite_or_null(r.baseline_error);
    j["curve"] = curve;
    write_json(dir / (id + ".json"), j);
    std::cout << csv.str() << "wrote " << (dir / (id + ".csv")).string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
    std::size_t n = 1000;
    std::size_t m = 1000;
    std::size_t steps = 1000;
    std::uint64_t seed = 0;
};

int cmd_bench_ops(const BenchArgs& a) {
    if (a.m > a.n || a.n == 0) throw ContractError("bench-ops needs 1 <= n and m <= n");
    if (a.steps == 0) {
        std::cout << "no steps requested\n";
        return 0;
    }
    Rng rng(effective_seed(a.seed));
    auto draw = [&] {
        if (a.m == a.n) {
            std::vector<double> v(a.n);
            for (double& x : v) x = standard_normal(rng) / std::sqrt(static_cast<double>(a.n));
            return FeatureVector::dense(std::move(v));
        }
        std::vector<std::size_t> idx;
        std::vector<bool> used(a.n, false);
        while (idx.size() < a.m) {
            const std::size_t i = std::uniform_int_distribution<std::size_t>(0, a.n - 1)(rng);
            if (!used[i]) {
                used[i] = true;
                idx.push_back(i);
            }
        }
        std::sort(idx.begin(), idx.end());
        return FeatureVector::binary(a.n, idx);
    };
    std::vector<FeatureVector> phis;
    const std::size_t pool = std::min<std::size_t>(a.steps + 1, 64);
    for (std::size_t i = 0; i < pool; ++i) phis.push_back(draw());

    std::printf("n=%zu m=%zu steps=%zu\n", a.n, a.m, a.steps);
    std::printf("%-12s %12s %12s %14s\n", "method", "ops/step", "budget", "ns/step");
    double times[2] = {0.0, 0.0};
    long counted[2] = {0, 0};
    const TdVariant methods[2] = {TdVariant::accumulate, TdVariant::true_online};
    for (int k = 0; k < 2; ++k) {
        TdConfig cfg;
        cfg.alpha = 0.01 / static_cast<double>(a.m);
        cfg.lambda = 0.9;
        cfg.gamma = 0.99;
        cfg.variant = methods[k];
        LearnerState s = LearnerState::make(cfg, a.n);
        step(s, cfg, phis[0], 1.0, phis[1 % pool], false);
        OpCounter ops;
        step(s, cfg, phis[1 % pool], 1.0, phis[2 % pool], false, &ops);
        counted[k] = static_cast<long>(ops.total());
        const auto t0 = std::chrono::steady_clock::now();
        for (std::size_t t = 0; t < a.steps; ++t) {
            step(s, cfg, phis[t % pool], 0.5, phis[(t + 1) % pool], false);
        }
        times[k] = std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - t0).count() /
                   static_cast<double>(a.steps);
        const std::size_t budget = k == 0 ? 3 * a.n + 5 * a.m : 3 * a.n + 11 * a.m;
        std::printf("%-12s %12ld %12zu %14.1f\n", std::string(to_string(methods[k])).c_str(), counted[k],
                    budget, times[k]);
    }
    std::printf("op overhead true_online - accumulate: %ld (6m = %zu)\n", counted[1] - counted[0], 6 * a.m);
    std::printf("op ratio %.4f, time ratio %.3f\n", static_cast<double>(counted[1]) / static_cast<double>(counted[0]),
                times[1] / times[0]);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tdkit: TD(lambda) experiments"};
    app.require_subcommand(1);

    GenMrpArgs gen;
    auto* g = app.add_subcommand("gen-mrp", "generate a random MRP archive");
    g->add_option("--k", gen.k, "number of states")->capture_default_str();
    g->add_option("--b", gen.b, "branching factor")->capture_default_str();
    g->add_option("--sigma", gen.sigma, "reward noise std")->capture_default_str();
    g->add_option("--gamma", gen.gamma, "discount")->capture_default_str();
    g->add_option("--seed", gen.seed, "generator seed")->capture_default_str();
    g->add_option("--rep", gen.rep, "also store a representation (tabular|binary|normal)");
    g->add_option("--out", gen.out, "archive path")->required();

    ChallengeArgs ch;
    auto* c = app.add_subcommand("challenge", "one- and two-state examples");
    c->add_option("--which", ch.which, "one-state | two-state")->required();
    c->add_option("--p", ch.p, "continuation probability")->capture_default_str();
    c->add_option("--runs", ch.runs, "independent runs (0: default)");
    c->add_option("--seed", ch.seed)->capture_default_str();
    c->add_option("--out-dir", ch.out_dir)->capture_default_str();

    SweepArgs sw;
    auto* s = app.add_subcommand("sweep", "alpha x lambda sweep on random MRPs");
    s->add_option("--mrp", sw.mrp, "archive path or k,b,sigma");
    s->add_option("--rep", sw.rep, "tabular | binary | normal")->capture_default_str();
    s->add_flag("--batch", sw.batch, "all 3 domains x 3 representations");
    s->add_option("--methods", sw.methods, "all or a comma list")->capture_default_str();
    s->add_option("--runs", sw.runs)->capture_default_str();
    s->add_option("--horizon", sw.horizon, "steps per run (0: 100 for k <= 10, else 1000)")->capture_default_str();
    s->add_option("--gamma", sw.gamma, "discount for generated MRPs")->capture_default_str();
    s->add_option("--seed", sw.seed)->capture_default_str();
    s->add_option("--threads", sw.threads, "worker threads (0: hardware)")->capture_default_str();
    s->add_option("--out-dir", sw.out_dir)->capture_default_str();

    NextingArgs nx;
    auto* n = app.add_subcommand("nexting", "GVF return predictions from signal data");
    n->add_option("--data", nx.data, "CSV with a header row");
    n->add_flag("--synth", nx.synth, "use synthetic arm signals");
    n->add_option("--steps", nx.steps, "synthetic length")->capture_default_str();
    n->add_option("--target", nx.target, "channel to predict")->capture_default_str();
    n->add_option("--gamma", nx.gamma)->capture_default_str();
    n->add_option("--seed", nx.seed)->capture_default_str();
    n->add_option("--threads", nx.threads)->capture_default_str();
    n->add_option("--out-dir", nx.out_dir)->capture_default_str();

    BenchArgs bn;
    auto* b = app.add_subcommand("bench-ops", "operation counts and step timings");
    b->add_option("--n", bn.n, "features")->capture_default_str();
    b->add_option("--m", bn.m, "active features")->capture_default_str();
    b->add_option("--steps", bn.steps)->capture_default_str();
    b->add_option("--seed", bn.seed)->capture_default_str();

    CLI11_PARSE(app, argc, argv);
    try {
        if (*g) return cmd_gen_mrp(gen);
        if (*c) return cmd_challenge(ch);
        if (*s) return cmd_sweep(sw);
        if (*n) return cmd_nexting(nx);
        if (*b) return cmd_bench_ops(bn);
    } catch (const std::exception& e) {
        std::cerr << "tdkit: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
