#include "tdkit/error.hpp"
#include "tdkit/nexting.hpp"
#include "tdkit/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace tdkit;
namespace fs = std::filesystem;

namespace {

// Direct discounted sum over the series extended by holding its last value.
double direct_return(const std::vector<double>& x, std::size_t t, double gamma) {
    double g = 0.0, disc = 1.0;
    for (std::size_t j = t + 1; j < x.size() + 4000; ++j) {
        g += disc * x[std::min(j, x.size() - 1)];
        disc *= gamma;
    }
    return g;
}

fs::path write_csv(const std::string& name, const std::string& body) {
    const auto p = fs::temp_directory_path() / ("tdkit_test_" + name + ".csv");
    std::ofstream(p) << body;
    return p;
}

double mean_abs_diff(const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t t = 1; t < x.size(); ++t) s += std::abs(x[t] - x[t - 1]);
    return s / static_cast<double>(x.size() - 1);
}

} // namespace

TEST_CASE("returns agree with the direct discounted sum") {
    Rng rng(4);
    for (double gamma : {0.0, 0.5, 0.9, 0.97}) {
        std::vector<double> x(300);
        for (double& v : x) v = uniform01(rng);
        const auto g = compute_returns(x, gamma);
        for (std::size_t t = 0; t < x.size(); ++t) {
            REQUIRE(g[t] == doctest::Approx(direct_return(x, t, gamma)).epsilon(1e-10));
        }
    }
}

TEST_CASE("return examples") {
    const std::vector<double> pulse{0, 0, 1, 0, 0, 0};
    CHECK(compute_returns(pulse, 0.5)[0] == doctest::Approx(0.5).epsilon(1e-12));
    const auto zero = compute_returns(pulse, 0.0);
    for (std::size_t t = 0; t + 1 < pulse.size(); ++t) CHECK(zero[t] == pulse[t + 1]);
    const auto flat = compute_returns(std::vector<double>(50, 0.3), 0.9);
    for (double g : flat) CHECK(g == doctest::Approx(3.0).epsilon(1e-12));
    CHECK_THROWS_AS(compute_returns(pulse, 1.0), ContractError);
}

TEST_CASE("load_signals normalises, selects columns and reports problems") {
    const auto p = write_csv("ok", "a,b,c\n1,10,5\n3,10,6\n2,10,7\n");
    const auto all = load_signals(p);
    CHECK(all.num_channels() == 3);
    CHECK(all.channel(0) == std::vector<double>{0.0, 1.0, 0.5});
    CHECK(all.channel(1) == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(all.denormalize(0, 0.5) == doctest::Approx(2.0));
    const auto pick = load_signals(p, {"c", "a"});
    CHECK(pick.channels == std::vector<std::string>{"c", "a"});
    CHECK(pick.channel(0) == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(pick.channel_index("a") == 1);

    CHECK_THROWS_AS(load_signals(p, {"missing"}), FormatError);
    CHECK_THROWS_AS(load_signals(write_csv("nan", "a,b\n1,2\nx,3\n")), FormatError);
    CHECK_THROWS_AS(load_signals(write_csv("short", "a,b\n1,2\n")), FormatError);
    CHECK_THROWS_AS(load_signals("/nonexistent/tdkit.csv"), FormatError);
}

TEST_CASE("synthetic arm data has a smooth and a rapidly switching channel") {
    const auto data = synth_signals("arm", 20000, 1);
    CHECK(data.num_channels() == 5);
    for (const auto& f : data.frames) {
        for (double v : f.values) REQUIRE((v >= 0.0 && v <= 1.0));
    }
    const double smooth = mean_abs_diff(data.channel(0));
    const double rapid = mean_abs_diff(data.channel(1));
    CHECK(rapid >= 10.0 * smooth);
    const auto again = synth_signals("arm", 20000, 1);
    CHECK(again.channel(3) == data.channel(3));
    CHECK_FALSE(synth_signals("arm", 20000, 2).channel(3) == data.channel(3));
    CHECK_THROWS_AS(synth_signals("leg", 10, 1), ContractError);
}

TEST_CASE("constant target: predictions converge to c / (1 - gamma)") {
    const auto data = synth_signals("constant", 3000, 0);
    TdConfig td;
    td.alpha = 0.01;
    td.lambda = 0.9;
    td.variant = TdVariant::true_online;
    GvfSpec gvf;
    const auto r = run_nexting(data, TileCoderConfig{}, gvf, td);
    CHECK_FALSE(r.diverged);
    CHECK(r.steps == 2999);
    CHECK(r.returns.front() == doctest::Approx(0.5 / 0.03).epsilon(1e-10));
    CHECK(r.predictions.back() == doctest::Approx(0.5 / 0.03).epsilon(1e-3));
    CHECK(r.abs_errors.back() < r.abs_errors.front());
}

TEST_CASE("learning beats the zero predictor on arm data") {
    const auto data = synth_signals("arm", 20000, 3);
    TdConfig td;
    td.alpha = 0.05;
    td.lambda = 0.9;
    td.variant = TdVariant::true_online;
    td.trace_cutoff = 1e-10;
    GvfSpec gvf;
    gvf.target_channel = 0;
    const auto r = run_nexting(data, TileCoderConfig{}, gvf, td);
    REQUIRE_FALSE(r.diverged);
    double zero = 0.0, late = 0.0;
    const std::size_t from = r.steps * 3 / 4;
    for (std::size_t t = from; t < r.steps; ++t) {
        zero += std::abs(r.returns[t]);
        late += r.abs_errors[t];
    }
    CHECK(late < 0.5 * zero);
}

TEST_CASE("gvf validation") {
    GvfSpec g;
    g.target_channel = 5;
    CHECK_THROWS_AS(g.validate(5), ContractError);
    g.target_channel = 0;
    g.gamma = 1.0;
    CHECK_THROWS_AS(g.validate(5), ContractError);
}
