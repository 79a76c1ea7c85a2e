#include "tdkit/error.hpp"
#include "tdkit/representation.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace tdkit;

TEST_CASE("tabular rows are one-hot") {
    const auto rep = make_tabular(4);
    CHECK(rep.dim() == 4);
    CHECK(rep.is_binary());
    for (std::size_t s = 0; s < 4; ++s) {
        const auto d = rep.features(s).to_dense();
        for (std::size_t i = 0; i < 4; ++i) CHECK(d[i] == (i == s ? 1.0 : 0.0));
    }
}

TEST_CASE("binary code of s + 1, big-endian") {
    const auto rep = make_binary(10);
    CHECK(rep.dim() == 4);
    CHECK(rep.is_binary());
    CHECK(rep.features(0).to_dense() == std::vector<double>{0, 0, 0, 1});
    CHECK(rep.features(4).to_dense() == std::vector<double>{0, 1, 0, 1});
    CHECK(rep.features(9).to_dense() == std::vector<double>{1, 0, 1, 0});
    CHECK(make_binary(1).dim() == 1);
    CHECK(make_binary(3).dim() == 2);
    CHECK(make_binary(4).dim() == 3);
    CHECK(make_binary(100).dim() == 7);
}

TEST_CASE("property: binary rows are distinct and never all-zero") {
    for (std::size_t k = 1; k <= 300; k += 7) {
        const auto rep = make_binary(k);
        std::set<std::vector<double>> seen;
        for (std::size_t s = 0; s < k; ++s) {
            const auto d = rep.features(s).to_dense();
            double sum = 0.0;
            for (double x : d) sum += x;
            REQUIRE(sum >= 1.0);
            seen.insert(d);
        }
        REQUIRE(seen.size() == k);
    }
}

TEST_CASE("normal rows have unit length and reproduce from the seed") {
    Rng a(5), b(5), c(6);
    const auto ra = make_normal(20, a);
    const auto rb = make_normal(20, b);
    const auto rc = make_normal(20, c);
    CHECK(ra.dim() == 5);
    CHECK_FALSE(ra.is_binary());
    for (std::size_t s = 0; s < 20; ++s) {
        double norm = 0.0;
        for (double x : ra.features(s).to_dense()) norm += x * x;
        CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ra.features(s) == rb.features(s));
    }
    CHECK_FALSE(ra.features(0) == rc.features(0));
}

TEST_CASE("aliased constant and lookups") {
    const auto rep = make_aliased_constant(3);
    CHECK(rep.dim() == 1);
    for (std::size_t s = 0; s < 3; ++s) CHECK(rep.features(s).to_dense() == std::vector<double>{1.0});
    CHECK_THROWS_AS(rep.features(3), ContractError);
    CHECK(parse_rep_kind("normal") == RepKind::normal);
    CHECK(to_string(RepKind::binary) == "binary");
    CHECK_THROWS_AS(parse_rep_kind("fourier"), ContractError);
}
