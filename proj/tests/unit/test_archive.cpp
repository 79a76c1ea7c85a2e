#include "tdkit/archive.hpp"
#include "tdkit/error.hpp"
#include "tdkit/mrp_suite.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tdkit;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / ("tdkit_test_archive_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("random MRPs and representations round-trip bit-exactly") {
    const auto dir = temp_dir("roundtrip");
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        RandomMrpSpec spec;
        spec.k = 30;
        spec.b = 4;
        spec.seed = seed;
        MrpArchive a;
        a.mrp = make_random_mrp(spec);
        Rng rng(seed);
        a.rep = make_normal(a.mrp.k, rng);
        a.meta["seed"] = seed;
        const auto path = dir / ("mrp_" + std::to_string(seed) + ".json");
        write_archive(path, a);
        const auto b = read_archive(path);
        CHECK(b.mrp == a.mrp);
        REQUIRE(b.rep.has_value());
        CHECK(b.rep->kind() == RepKind::normal);
        for (std::size_t s = 0; s < a.mrp.k; ++s) CHECK(b.rep->features(s) == a.rep->features(s));
        CHECK(b.meta["seed"] == seed);
    }
    fs::remove_all(dir);
}

TEST_CASE("episodic instances keep their termination tables") {
    const auto two = make_two_state(0.5);
    const auto j = to_json(two.mrp);
    CHECK(j["terminal"] == nlohmann::json::array({true, true}));
    CHECK(mrp_from_json(j) == two.mrp);
}

TEST_CASE("writing the same archive twice gives identical bytes") {
    const auto dir = temp_dir("bytes");
    RandomMrpSpec spec;
    spec.seed = 5;
    MrpArchive a;
    a.mrp = make_random_mrp(spec);
    a.rep = make_binary(a.mrp.k);
    write_archive(dir / "a.json", a);
    write_archive(dir / "b.json", a);
    CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
    fs::remove_all(dir);
}

TEST_CASE("malformed archives are rejected") {
    auto j = to_json(make_one_state(0.5).mrp);
    auto bad = j;
    bad["format"] = "other";
    CHECK_THROWS_AS(archive_from_json(bad), FormatError);
    bad = j;
    bad.erase("P");
    CHECK_THROWS_AS(mrp_from_json(bad), FormatError);
    bad = j;
    bad["P"] = nlohmann::json::array({nlohmann::json::array({0.9})});
    CHECK_THROWS_AS(mrp_from_json(bad), FormatError);
    CHECK_THROWS_AS(read_archive("/nonexistent/tdkit.json"), FormatError);
}
