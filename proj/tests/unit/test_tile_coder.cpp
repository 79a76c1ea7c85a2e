#include "tdkit/error.hpp"
#include "tdkit/rng.hpp"
#include "tdkit/tile_coder.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace tdkit;

namespace {

// Independent re-implementation of the documented hash layout.
std::vector<std::size_t> reference_encode(const TileCoderConfig& cfg, const std::vector<double>& x) {
    std::uint64_t tiles = 1;
    for (std::size_t d = 0; d < cfg.num_signals; ++d) tiles *= cfg.bins_per_signal;
    const std::size_t bias = cfg.include_bias ? 1 : 0;
    const std::size_t seg = (cfg.hash_size - bias) / cfg.num_tilings;
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < cfg.num_tilings; ++t) {
        std::uint64_t h = 0xcbf29ce484222325ULL ^ mix64(cfg.seed);
        h = (h ^ t) * 0x100000001b3ULL;
        for (double v : x) {
            auto c = static_cast<std::uint64_t>(std::floor(v * static_cast<double>(cfg.bins_per_signal - 1) +
                                                           static_cast<double>(t) / static_cast<double>(cfg.num_tilings)));
            c = std::min<std::uint64_t>(c, cfg.bins_per_signal - 1);
            h = (h ^ c) * 0x100000001b3ULL;
        }
        out.push_back(t * seg + mix64(h) % seg);
    }
    if (cfg.include_bias) out.push_back(cfg.hash_size - 1);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> random_frame(Rng& rng, std::size_t d) {
    std::vector<double> x(d);
    for (double& v : x) v = uniform01(rng);
    return x;
}

} // namespace

TEST_CASE("default coder: 800,001 raw indices, 200,000 hashed, 9 active") {
    const TileCoder coder(TileCoderConfig{});
    CHECK(coder.raw_space_size() == 800001);
    CHECK(coder.dim() == 200000);
    CHECK(coder.active_per_frame() == 9);
}

TEST_CASE("property: every frame has exactly T + 1 active binary features") {
    const TileCoder coder(TileCoderConfig{});
    Rng rng(1);
    for (int i = 0; i < 20000; ++i) {
        const auto phi = coder.encode(random_frame(rng, 5));
        REQUIRE(phi.active_count() == 9);
        REQUIRE(phi.is_binary());
        REQUIRE(phi.indices().back() == 199999);
    }
    // corners of the unit cube
    for (double v : {0.0, 1.0}) CHECK(coder.encode(std::vector<double>(5, v)).active_count() == 9);
}

TEST_CASE("encoding follows the documented hash") {
    for (std::uint64_t seed : {0ULL, 7ULL, 123456789ULL}) {
        TileCoderConfig cfg;
        cfg.seed = seed;
        const TileCoder coder(cfg);
        Rng rng(seed);
        for (int i = 0; i < 500; ++i) {
            const auto x = random_frame(rng, 5);
            const auto phi = coder.encode(x);
            const std::vector<std::size_t> got(phi.indices().begin(), phi.indices().end());
            REQUIRE(got == reference_encode(cfg, x));
        }
    }
}

TEST_CASE("raw indices stay inside their tiling block") {
    const TileCoder coder(TileCoderConfig{});
    Rng rng(3);
    for (int i = 0; i < 2000; ++i) {
        const auto raw = coder.raw_indices(random_frame(rng, 5));
        REQUIRE(raw.size() == 9);
        for (std::size_t t = 0; t < 8; ++t) {
            REQUIRE(raw[t] >= t * 100000);
            REQUIRE(raw[t] < (t + 1) * 100000);
        }
        REQUIRE(raw[8] == 800000);
    }
}

TEST_CASE("deterministic and local") {
    const TileCoder coder(TileCoderConfig{});
    const std::vector<double> x{0.2, 0.4, 0.6, 0.8, 0.1};
    CHECK(coder.encode(x) == coder.encode(x));
    CHECK(coder.encode(x) == TileCoder(TileCoderConfig{}).encode(x));
    // a tiny perturbation inside every tile changes nothing
    std::vector<double> y = x;
    y[0] += 1e-9;
    CHECK(coder.encode(x) == coder.encode(y));
    // a far-away frame shares only the bias unit in practice
    const auto far = coder.encode(std::vector<double>{0.9, 0.1, 0.0, 0.3, 1.0});
    std::set<std::size_t> shared;
    for (auto i : far.indices()) {
        const auto& a = coder.encode(x).indices();
        if (std::find(a.begin(), a.end(), i) != a.end()) shared.insert(i);
    }
    CHECK(shared == std::set<std::size_t>{199999});
}

TEST_CASE("configuration checks") {
    const TileCoder coder(TileCoderConfig{});
    CHECK_THROWS_AS(coder.encode(std::vector<double>{0.1, 0.2}), ContractError);
    CHECK_THROWS_AS(coder.encode(std::vector<double>{0.1, 0.2, 0.3, 0.4, 1.5}), ContractError);
    TileCoderConfig bad;
    bad.hash_size = 4;
    CHECK_THROWS_AS(TileCoder{bad}, ContractError);
    TileCoderConfig nobias;
    nobias.include_bias = false;
    CHECK(TileCoder(nobias).encode(std::vector<double>(5, 0.3)).active_count() == 8);
}
