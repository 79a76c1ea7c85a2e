#include "tdkit/error.hpp"
#include "tdkit/linear.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

using namespace tdkit;

TEST_CASE("dot on dense, empty and sparse vectors") {
    OpCounter ops;
    CHECK(dot(WeightVector({1, 2, 3}), FeatureVector::dense({1, 1, 1}), &ops) == 6.0);
    CHECK(ops.multiplications == 3);
    CHECK(ops.additions == 2);

    ops.reset();
    CHECK(dot(WeightVector({5, 5}), FeatureVector::sparse(2, {}, {}), &ops) == 0.0);
    CHECK(ops.total() == 0);

    ops.reset();
    const auto phi = FeatureVector::sparse(3, {0, 2}, {1, 1});
    CHECK(dot(WeightVector({0.5, -1, 2}), phi, &ops) == 2.5);
    CHECK(ops.multiplications == 2);
    CHECK(ops.additions == 1);
}

TEST_CASE("dot rejects dimension mismatch") {
    CHECK_THROWS_AS(dot(WeightVector({1, 2}), FeatureVector::dense({1, 2, 3})), ContractError);
}

TEST_CASE("axpy_into examples") {
    WeightVector w({1, 1});
    axpy_into(w, 0.0, FeatureVector::dense({7, 9}));
    CHECK(w == WeightVector({1, 1}));

    axpy_into(w, 2.0, FeatureVector::dense({1, 3}));
    CHECK(w == WeightVector({3, 7}));

    WeightVector z(3);
    OpCounter ops;
    axpy_into(z, 1.0, FeatureVector::sparse(3, {1}, {4}), &ops);
    CHECK(z == WeightVector({0, 4, 0}));
    CHECK(ops.total() == 2);
}

TEST_CASE("axpy_into contract violations") {
    WeightVector w(2);
    CHECK_THROWS_AS(axpy_into(w, 1.0, FeatureVector::dense({1, 2, 3})), ContractError);
    CHECK_THROWS_AS(axpy_into(w, std::numeric_limits<double>::infinity(), FeatureVector::dense({1, 2})),
                    ContractError);
    CHECK_THROWS_AS(axpy_into(w, std::nan(""), FeatureVector::dense({1, 2})), ContractError);
}

TEST_CASE("FeatureVector construction invariants") {
    CHECK_THROWS_AS(FeatureVector::sparse(3, {2, 1}, {1, 1}), ContractError);
    CHECK_THROWS_AS(FeatureVector::sparse(3, {1, 1}, {1, 1}), ContractError);
    CHECK_THROWS_AS(FeatureVector::sparse(3, {3}, {1}), ContractError);
    CHECK_THROWS_AS(FeatureVector::sparse(3, {0}, {1, 2}), ContractError);

    const auto b = FeatureVector::binary(5, {1, 4});
    CHECK(b.is_binary());
    CHECK(b.active_count() == 2);
    CHECK(b.at(4) == 1.0);
    CHECK(b.at(2) == 0.0);

    const auto d = FeatureVector::dense({0.5, 0.0});
    CHECK_FALSE(d.is_binary());
    CHECK(d.active_count() == 2);
    CHECK(FeatureVector::dense({0, 1, 1}).is_binary());
}

TEST_CASE("property: sparse dot equals dot over the densified copy, bit for bit") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> normal;
    std::uniform_int_distribution<std::size_t> dim_dist(1, 40);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = dim_dist(rng);
        std::vector<double> w(n);
        for (double& x : w) x = normal(rng);
        std::vector<std::size_t> idx;
        std::vector<double> val;
        for (std::size_t i = 0; i < n; ++i) {
            if (rng() % 3 == 0) {
                idx.push_back(i);
                val.push_back(normal(rng));
            }
        }
        const auto sparse = FeatureVector::sparse(n, idx, val);
        const double a = dot(std::span<const double>(w), sparse);
        const double b = dot(std::span<const double>(w), sparse.densified());
        REQUIRE(a == b);
    }
}

TEST_CASE("property: sparse axpy leaves entries outside the support untouched") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + rng() % 30;
        std::vector<double> w(n);
        for (double& x : w) x = normal(rng);
        const auto before = w;
        std::vector<std::size_t> idx;
        std::vector<double> val;
        for (std::size_t i = 0; i < n; ++i) {
            if (rng() % 4 == 0) {
                idx.push_back(i);
                val.push_back(normal(rng));
            }
        }
        const auto v = FeatureVector::sparse(n, idx, val);
        axpy_into(std::span<double>(w), normal(rng), v);
        for (std::size_t i = 0; i < n; ++i) {
            if (std::find(idx.begin(), idx.end(), i) == idx.end()) REQUIRE(w[i] == before[i]);
        }
    }
}
