#pragma once

#include "tdkit/mrp.hpp"
#include "tdkit/mrp_suite.hpp"
#include "tdkit/nexting.hpp"
#include "tdkit/representation.hpp"
#include "tdkit/rng.hpp"
#include "tdkit/td_learner.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace tdkit {

/// {0, 0.1, ..., 0.9, 0.95, 0.975, 0.99, 1}
std::vector<double> default_lambdas();
/// {2^-12, ..., 2^-1, 1, 1.5, 2}
std::vector<double> default_alphas();
std::vector<TdVariant> all_variants();

// ---------------------------------------------------------------------------
// Random-MRP sweeps

struct SweepConfig {
    std::vector<double> alphas = default_alphas();
    std::vector<double> lambdas = default_lambdas();
    std::vector<TdVariant> methods = all_variants();
    std::size_t runs = 50;
    std::size_t horizon = 100;
    std::uint64_t master_seed = 0;
    std::size_t threads = 0; ///< 0: hardware concurrency

    void validate() const;
};

/// One (method, alpha, lambda, run) evaluation.
struct SweepCell {
    TdVariant method = TdVariant::true_online;
    double alpha = 0.0;
    double lambda = 0.0;
    std::size_t run = 0;
    double raw_error = 0.0;   ///< per-step MSE vs LMS, averaged over the horizon
    double final_error = 0.0; ///< MSE vs LMS after the last step
    bool diverged = false;
    std::uint64_t stream_hash = 0; ///< hash of the transitions this cell consumed
};

/// Run-averaged error of one (method, alpha, lambda) setting.
struct MeanCell {
    TdVariant method = TdVariant::true_online;
    double alpha = 0.0;
    double lambda = 0.0;
    double mean_error = 0.0;
    bool diverged = false;
};

struct MethodSummary {
    TdVariant method = TdVariant::true_online;
    double best_error = 0.0;
    double best_alpha = 0.0;
    double best_lambda = 0.0;
    double baseline_error = 0.0; ///< best-alpha error at lambda = 0
    double baseline_alpha = 0.0;
    double normalized = 1.0;     ///< best_error / baseline_error
};

struct SweepResult {
    SweepConfig config;
    std::vector<SweepCell> cells; ///< ordered by (method, alpha, lambda, run)
    std::vector<MeanCell> means;  ///< ordered by (method, alpha, lambda)
    std::vector<MethodSummary> summary;
    std::vector<std::uint64_t> trajectory_hashes; ///< one per run
    WeightVector lms_theta;
};

/// Per method: the best mean error over (alpha, lambda) divided by the best
/// mean error over alpha at lambda = 0. Divergent cells count as +inf.
std::vector<MethodSummary> aggregate_and_normalize(std::span<const MeanCell> cells);

/// Every run draws one trajectory of `horizon` transitions from its own
/// trajectory stream and replays it against each (method, alpha, lambda)
/// learner starting from theta = 0. The error metric is the
/// state-distribution-weighted MSE between theta and the LMS solution.
SweepResult run_sweep(const Mrp& mrp, const Representation& rep, const SweepConfig& cfg);

/// Hash of a transition sequence (FNV-1a over s, s', terminal, reward bits).
std::uint64_t hash_transitions(std::span<const Transition> transitions);

std::vector<Transition> sample_trajectory(const Mrp& mrp, std::size_t steps, Rng& rng);

void write_sweep_csv(std::ostream& out, const SweepResult& result);
nlohmann::json sweep_summary_json(const SweepResult& result);

/// One cell of the domain x representation table.
struct ComboResult {
    RandomMrpSpec domain;
    RepKind rep = RepKind::tabular;
    std::size_t redraws = 0;
    SweepResult sweep;
};

/// The three benchmark domains (10,3,0.1), (100,10,0.1), (100,3,0).
std::vector<RandomMrpSpec> benchmark_domains(double gamma = 0.99);

/// Sweeps every domain/representation pair. Replacing traces are skipped
/// for the non-binary representation. Horizon is 100 for k <= 10 and 1000
/// otherwise unless base.horizon is nonzero and `fixed_horizon` is set.
std::vector<ComboResult> run_benchmark_table(const std::vector<RandomMrpSpec>& domains,
                                             const std::vector<RepKind>& reps, SweepConfig base,
                                             bool fixed_horizon = false);

/// Builds the representation for a domain with its seeded stream.
Representation build_representation(RepKind kind, std::size_t k, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Challenge examples

struct OneStateConfig {
    double p = 0.5;
    double lambda = 1.0;
    std::vector<double> alphas = default_alphas();
    std::vector<TdVariant> methods = all_variants();
    std::size_t episodes = 10;
    std::size_t runs = 100;
    std::uint64_t seed = 0;
};

struct OneStatePoint {
    TdVariant method = TdVariant::true_online;
    double alpha = 0.0;
    double mean_error = 0.0; ///< end-of-episode RMS error, averaged over episodes and runs
    double max_error = 0.0;  ///< largest end-of-episode error in any run
    bool diverged = false;   ///< some run hit the divergence guard
};

std::vector<OneStatePoint> run_challenge_one_state(const OneStateConfig& cfg);

struct TwoStateConfig {
    double p = 0.5;
    double alpha = 0.01;
    std::vector<double> lambdas = {0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<TdVariant> methods = all_variants();
    /// Converged once the mean error of a window of steps differs from the
    /// previous window's by less than `tolerance` (relative). The reported
    /// error is that of the window-averaged weight.
    std::size_t window = 1000;
    double tolerance = 0.01;
    std::size_t step_cap = 1'000'000;
    std::size_t runs = 20;
    std::uint64_t seed = 0;
};

struct TwoStatePoint {
    TdVariant method = TdVariant::true_online;
    double lambda = 0.0;
    double error = 0.0;        ///< RMS error of the converged weight, averaged over runs
    double mean_steps = 0.0;
    bool all_converged = true; ///< false if any run hit the step cap
};

struct TwoStateResult {
    std::vector<TwoStatePoint> points;
    double lms_error = 0.0;
    double lms_theta = 0.0;
};

TwoStateResult run_challenge_two_state(const TwoStateConfig& cfg);

// ---------------------------------------------------------------------------
// Nexting sweeps

struct NextingSweepConfig {
    std::vector<double> alphas = default_alphas();
    std::vector<double> lambdas = default_lambdas();
    std::vector<TdVariant> methods = all_variants();
    double trace_cutoff = 1e-10;
    std::size_t threads = 0;
};

struct NextingCurvePoint {
    TdVariant method = TdVariant::true_online;
    double lambda = 0.0;
    double best_alpha = 0.0;
    double best_error = 0.0;
    double normalized = 1.0;
};

struct NextingSweepResult {
    std::vector<MeanCell> cells; ///< mean absolute return error per (method, alpha, lambda)
    std::vector<NextingCurvePoint> curve;
    double baseline_error = 0.0;
};

NextingSweepResult run_nexting_sweep(const SignalSet& data, const TileCoderConfig& coder_cfg,
                                     const GvfSpec& gvf, const NextingSweepConfig& cfg);

} // namespace tdkit
