#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "scat1d/config.hpp"
#include "scat1d/errors.hpp"

using namespace scat1d;
using Catch::Matchers::ContainsSubstring;

namespace {
const char* kFullConfig = R"json({
  "schema_version": 1,
  "kind": "figure1",
  "potential": {"family": "bump_cosine", "amplitude": 10.0},
  "potential_b": {"family": "bump_two_cosines", "amplitude": 8.164965809277259,
                  "amplitude2": 8.164965809277259},
  "epsilon": [0.2, 0.1, 0.05],
  "k_grid": {"min": 0.01, "max": 2.0, "count": 40, "imag": 0.0},
  "kappa_grid": {"min": 0.05, "max": 1.8, "count": 25},
  "solver": {"rtol": 1e-9, "atol": 1e-11, "L": 8.0, "h_max": 0.002},
  "decay": {"t_max": 120.0, "dt": 0.04, "grid_h": 0.01, "grid_half_width": 700.0,
            "samples_per_decade": 10, "crosscheck_times": [1.0, 4.0]},
  "guard_radius": 0.002,
  "out_dir": "results"
})json";
}  // namespace

TEST_CASE("full configs survive a serialization round trip", "[config]") {
    const ExperimentConfig a = parse_config_text(kFullConfig);
    CHECK(a.kind == ExperimentKind::figure1);
    CHECK(a.potential.family == "bump_cosine");
    REQUIRE(a.potential_b.has_value());
    CHECK(a.potential_b->family == "bump_two_cosines");
    REQUIRE(a.epsilon.size() == 3);
    CHECK(a.k_grid.count == 40);
    CHECK(a.kappa_grid.max == 1.8);
    CHECK(a.solver.rtol == 1e-9);
    CHECK(a.decay.samples_per_decade == 10);
    CHECK(a.decay.crosscheck_times.size() == 2);
    CHECK(a.out_dir == "results");

    const ExperimentConfig b = config_from_json(to_json(a));
    CHECK(to_json(a).dump() == to_json(b).dump());
    CHECK(config_hash_hex(a) == config_hash_hex(b));
}

TEST_CASE("minimal configs fill in the documented defaults", "[config]") {
    const ExperimentConfig c = parse_config_text(
        R"({"schema_version": 1, "kind": "sweep",
            "potential": {"family": "zero"}, "epsilon": [0.1]})");
    CHECK(c.kappa_grid.min == 0.02);
    CHECK(c.kappa_grid.max == 2.0);
    CHECK(c.kappa_grid.count == 100);
    CHECK(c.decay.t_max == 300.0);
    CHECK(c.decay.crosscheck_times.size() == 3);
    CHECK(c.guard_radius == 1e-3);
    CHECK(c.out_dir == "out");
    CHECK_FALSE(c.potential_b.has_value());
}

TEST_CASE("config hashing is canonical and content-sensitive", "[config]") {
    const ExperimentConfig a = parse_config_text(
        R"({"schema_version": 1, "kind": "sweep",
            "potential": {"family": "zero"}, "epsilon": [0.1]})");
    // same content, different formatting and key order
    const ExperimentConfig b = parse_config_text(
        R"({ "epsilon":[0.1],"potential":{"family":"zero"},
             "kind":"sweep","schema_version":1 })");
    CHECK(config_hash_hex(a) == config_hash_hex(b));
    CHECK(config_hash_hex(a).size() == 16);

    const ExperimentConfig c = parse_config_text(
        R"({"schema_version": 1, "kind": "sweep",
            "potential": {"family": "zero"}, "epsilon": [0.2]})");
    CHECK(config_hash_hex(a) != config_hash_hex(c));
}

TEST_CASE("config errors name the offending field", "[config]") {
    CHECK_THROWS_WITH(parse_config_text("not json at all"),
                      ContainsSubstring("parse error"));
    CHECK_THROWS_WITH(parse_config_text(R"({"kind": "sweep"})"),
                      ContainsSubstring("schema_version"));
    CHECK_THROWS_WITH(parse_config_text(
                          R"({"schema_version": 2, "kind": "sweep",
                              "potential": {"family": "zero"}, "epsilon": [0.1]})"),
                      ContainsSubstring("schema_version"));
    CHECK_THROWS_WITH(parse_config_text(
                          R"({"schema_version": 1, "kind": "mystery",
                              "potential": {"family": "zero"}, "epsilon": [0.1]})"),
                      ContainsSubstring("kind"));
    CHECK_THROWS_WITH(parse_config_text(
                          R"({"schema_version": 1, "kind": "sweep",
                              "potential": {"family": "nope"}, "epsilon": [0.1]})"),
                      ContainsSubstring("family"));
    CHECK_THROWS_WITH(parse_config_text(
                          R"({"schema_version": 1, "kind": "sweep",
                              "potential": {"family": "zero"}, "epsilon": [0.7]})"),
                      ContainsSubstring("epsilon"));
    CHECK_THROWS_WITH(parse_config_text(
                          R"({"schema_version": 1, "kind": "sweep",
                              "potential": {"family": "zero"}, "epsilon": [0.1],
                              "kappa_grid": {"min": 0.1, "max": 3.0, "count": 5}})"),
                      ContainsSubstring("kappa_grid"));
    CHECK_THROWS_WITH(parse_config_text(
                          R"({"schema_version": 1, "kind": "sweep",
                              "potential": {"family": "zero"}, "epsilon": [0.1],
                              "solver": {"rtol": -1.0}})"),
                      ContainsSubstring("solver"));
    CHECK_THROWS_WITH(parse_config_text(
                          R"({"schema_version": 1, "kind": "sweep",
                              "potential": {"family": "zero"}, "epsilon": [0.1],
                              "decay": {"crosscheck_times": [-1.0]}})"),
                      ContainsSubstring("crosscheck_times"));
}

TEST_CASE("grids sample both endpoints uniformly", "[config]") {
    GridSpec g{1.0, 3.0, 5, 0.0};
    const std::vector<double> s = g.real_samples();
    REQUIRE(s.size() == 5);
    CHECK(s.front() == 1.0);
    CHECK(s.back() == 3.0);
    CHECK(std::abs(s[2] - 2.0) < 1e-15);
    g.count = 1;
    CHECK_THROWS_AS(g.real_samples(), ConfigError);
}

TEST_CASE("experiment kind labels round trip", "[config]") {
    for (ExperimentKind k : {ExperimentKind::sweep, ExperimentKind::figure1,
                             ExperimentKind::figure2, ExperimentKind::convergence,
                             ExperimentKind::pole_study, ExperimentKind::decay})
        CHECK(kind_from_label(kind_label(k)) == k);
    CHECK_THROWS_AS(kind_from_label("nonsense"), ConfigError);
}

TEST_CASE("run manifests serialize their provenance", "[config]") {
    RunManifest m;
    m.config_hash = "0123456789abcdef";
    m.outputs.push_back({"sweep_eps0.1_full.csv", "aabbccdd00112233", 1024});
    m.stages.push_back({"sweep", 1.5});
    m.skipped_points.push_back("kappa:0.622733");
    const Json j = m.to_json();
    CHECK(j["schema_version"] == 1);
    CHECK(j["config_hash"] == "0123456789abcdef");
    CHECK(j["tool_version"] == kToolVersion);
    CHECK(j["outputs"].size() == 1);
    CHECK(j["outputs"][0]["bytes"] == 1024);
    CHECK(j["stages"][0]["name"] == "sweep");
    CHECK(j["skipped_points"].size() == 1);
}
