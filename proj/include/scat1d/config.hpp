#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>  // vendored single-header nlohmann/json

#include "scat1d/errors.hpp"
#include "scat1d/potential.hpp"
#include "scat1d/version.hpp"

namespace scat1d {

using Json = nlohmann::json;

enum class ExperimentKind { sweep, figure1, figure2, convergence, pole_study, decay };

inline const char* kind_label(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::sweep: return "sweep";
        case ExperimentKind::figure1: return "figure1";
        case ExperimentKind::figure2: return "figure2";
        case ExperimentKind::convergence: return "convergence";
        case ExperimentKind::pole_study: return "pole_study";
        case ExperimentKind::decay: return "decay";
    }
    throw ConfigError("unknown experiment kind");
}

inline ExperimentKind kind_from_label(const std::string& s) {
    if (s == "sweep") return ExperimentKind::sweep;
    if (s == "figure1") return ExperimentKind::figure1;
    if (s == "figure2") return ExperimentKind::figure2;
    if (s == "convergence") return ExperimentKind::convergence;
    if (s == "pole_study") return ExperimentKind::pole_study;
    if (s == "decay") return ExperimentKind::decay;
    throw ConfigError("field 'kind': unknown value '" + s +
                      "' (expected sweep|figure1|figure2|convergence|pole_study|decay)");
}

struct PotentialSpec {
    std::string family = "zero";
    // parameters; meaning depends on the family (see instantiate()).
    double amplitude = 10.0;
    double amplitude2 = 10.0;
    double rho = 1.0;
    double x0 = 0.0;
    double depth = 1.0;
    double half_width = 1.0;

    TwoScalePotential instantiate() const {
        if (family == "zero") return make_zero();
        if (family == "bump_cosine") return make_bump_cosine(amplitude);
        if (family == "double_bump_cosine") return make_double_bump_cosine(amplitude);
        if (family == "bump_two_cosines") return make_bump_two_cosines(amplitude, amplitude2);
        if (family == "soliton") return make_soliton(rho, x0);
        if (family == "soliton_microstructure")
            return make_soliton_with_microstructure(rho, x0, amplitude);
        if (family == "square_well") return make_square_well(depth, half_width);
        throw ConfigError("potential family '" + family + "' is not known");
    }
};

struct GridSpec {
    double min = 0.0;
    double max = 1.0;
    std::size_t count = 101;
    double imag = 0.0;  // shared imaginary part of the samples (k grids only)

    std::vector<double> real_samples() const {
        if (count < 2) throw ConfigError("grid: count must be at least 2");
        if (!(max > min)) throw ConfigError("grid: max must exceed min");
        std::vector<double> out(count);
        for (std::size_t i = 0; i < count; ++i)
            out[i] = min + (max - min) * static_cast<double>(i) /
                               static_cast<double>(count - 1);
        return out;
    }
};

struct DecaySpec {
    double t_max = 300.0;
    double dt = 0.05;
    double grid_h = 0.02;
    double grid_half_width = 0.0;  // 0 = auto from ballistic bound
    std::size_t samples_per_decade = 12;
    std::vector<double> crosscheck_times = {1.0, 5.0, 10.0};
};

struct SolverSpec {
    double rtol = 1e-10;
    double atol = 1e-12;
    double L = 0.0;     // 0 = auto truncation radius
    double h_max = 0.0; // 0 = auto step cap
};

struct ExperimentConfig {
    int schema_version = 1;
    ExperimentKind kind = ExperimentKind::sweep;
    PotentialSpec potential;
    std::optional<PotentialSpec> potential_b;  // second family for universality overlays
    std::vector<double> epsilon = {0.1};
    GridSpec k_grid;
    GridSpec kappa_grid{0.02, 2.0, 100, 0.0};
    SolverSpec solver;
    DecaySpec decay;
    double guard_radius = 1e-3;
    std::string out_dir = "out";
};

namespace detail {

inline const Json& require_field(const Json& j, const char* name, const char* where) {
    auto it = j.find(name);
    if (it == j.end())
        throw ConfigError(std::string(where) + ": missing required field '" + name + "'");
    return *it;
}

inline double number_field(const Json& j, const char* name, const char* where, double fallback,
                           bool required = false) {
    auto it = j.find(name);
    if (it == j.end()) {
        if (required)
            throw ConfigError(std::string(where) + ": missing required field '" + name + "'");
        return fallback;
    }
    if (!it->is_number())
        throw ConfigError(std::string(where) + ": field '" + name + "' must be a number");
    return it->get<double>();
}

inline PotentialSpec parse_potential(const Json& j, const char* where) {
    if (!j.is_object()) throw ConfigError(std::string(where) + ": must be an object");
    PotentialSpec p;
    const Json& fam = require_field(j, "family", where);
    if (!fam.is_string())
        throw ConfigError(std::string(where) + ": field 'family' must be a string");
    p.family = fam.get<std::string>();
    p.amplitude = number_field(j, "amplitude", where, p.amplitude);
    p.amplitude2 = number_field(j, "amplitude2", where, p.amplitude2);
    p.rho = number_field(j, "rho", where, p.rho);
    p.x0 = number_field(j, "x0", where, p.x0);
    p.depth = number_field(j, "depth", where, p.depth);
    p.half_width = number_field(j, "half_width", where, p.half_width);
    p.instantiate();  // validate the family name eagerly
    return p;
}

inline GridSpec parse_grid(const Json& j, const char* where, const GridSpec& defaults) {
    if (!j.is_object()) throw ConfigError(std::string(where) + ": must be an object");
    GridSpec g = defaults;
    g.min = number_field(j, "min", where, g.min, true);
    g.max = number_field(j, "max", where, g.max, true);
    const double cnt = number_field(j, "count", where, static_cast<double>(g.count), true);
    if (!(cnt >= 2.0) || cnt != std::floor(cnt))
        throw ConfigError(std::string(where) + ": field 'count' must be an integer >= 2");
    g.count = static_cast<std::size_t>(cnt);
    g.imag = number_field(j, "imag", where, 0.0);
    return g;
}

}  // namespace detail

inline Json to_json(const PotentialSpec& p) {
    Json j;
    j["family"] = p.family;
    if (p.family == "bump_cosine" || p.family == "double_bump_cosine")
        j["amplitude"] = p.amplitude;
    if (p.family == "bump_two_cosines") {
        j["amplitude"] = p.amplitude;
        j["amplitude2"] = p.amplitude2;
    }
    if (p.family == "soliton" || p.family == "soliton_microstructure") {
        j["rho"] = p.rho;
        j["x0"] = p.x0;
    }
    if (p.family == "soliton_microstructure") j["amplitude"] = p.amplitude;
    if (p.family == "square_well") {
        j["depth"] = p.depth;
        j["half_width"] = p.half_width;
    }
    return j;
}

inline Json to_json(const ExperimentConfig& c) {
    Json j;
    j["schema_version"] = c.schema_version;
    j["kind"] = kind_label(c.kind);
    j["potential"] = to_json(c.potential);
    if (c.potential_b) j["potential_b"] = to_json(*c.potential_b);
    j["epsilon"] = c.epsilon;
    j["k_grid"] = Json{{"min", c.k_grid.min},
                       {"max", c.k_grid.max},
                       {"count", c.k_grid.count},
                       {"imag", c.k_grid.imag}};
    j["kappa_grid"] = Json{{"min", c.kappa_grid.min},
                           {"max", c.kappa_grid.max},
                           {"count", c.kappa_grid.count}};
    j["solver"] = Json{{"rtol", c.solver.rtol},
                       {"atol", c.solver.atol},
                       {"L", c.solver.L},
                       {"h_max", c.solver.h_max}};
    j["decay"] = Json{{"t_max", c.decay.t_max},
                      {"dt", c.decay.dt},
                      {"grid_h", c.decay.grid_h},
                      {"grid_half_width", c.decay.grid_half_width},
                      {"samples_per_decade", c.decay.samples_per_decade},
                      {"crosscheck_times", c.decay.crosscheck_times}};
    j["guard_radius"] = c.guard_radius;
    j["out_dir"] = c.out_dir;
    return j;
}

inline ExperimentConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    ExperimentConfig c;
    const Json& sv = detail::require_field(j, "schema_version", "config");
    if (!sv.is_number_integer() || sv.get<int>() != 1)
        throw ConfigError("field 'schema_version': this tool reads schema version 1");
    const Json& kd = detail::require_field(j, "kind", "config");
    if (!kd.is_string()) throw ConfigError("field 'kind' must be a string");
    c.kind = kind_from_label(kd.get<std::string>());
    c.potential = detail::parse_potential(detail::require_field(j, "potential", "config"),
                                          "field 'potential'");
    if (j.contains("potential_b"))
        c.potential_b = detail::parse_potential(j["potential_b"], "field 'potential_b'");

    const Json& eps = detail::require_field(j, "epsilon", "config");
    if (!eps.is_array() || eps.empty())
        throw ConfigError("field 'epsilon' must be a nonempty array of numbers");
    c.epsilon.clear();
    for (const Json& e : eps) {
        if (!e.is_number()) throw ConfigError("field 'epsilon': entries must be numbers");
        const double v = e.get<double>();
        if (!(v > 0.0) || v > 0.5)
            throw ConfigError("field 'epsilon': value " + std::to_string(v) +
                              " outside (0, 0.5]");
        c.epsilon.push_back(v);
    }

    if (j.contains("k_grid")) c.k_grid = detail::parse_grid(j["k_grid"], "field 'k_grid'", {});
    if (j.contains("kappa_grid")) {
        c.kappa_grid = detail::parse_grid(j["kappa_grid"], "field 'kappa_grid'", c.kappa_grid);
        if (!(c.kappa_grid.min > 0.0) || c.kappa_grid.max > 2.0)
            throw ConfigError("field 'kappa_grid': range must lie inside (0, 2]");
    }
    if (j.contains("solver")) {
        const Json& s = j["solver"];
        if (!s.is_object()) throw ConfigError("field 'solver' must be an object");
        c.solver.rtol = detail::number_field(s, "rtol", "field 'solver'", c.solver.rtol);
        c.solver.atol = detail::number_field(s, "atol", "field 'solver'", c.solver.atol);
        c.solver.L = detail::number_field(s, "L", "field 'solver'", c.solver.L);
        c.solver.h_max = detail::number_field(s, "h_max", "field 'solver'", c.solver.h_max);
        if (!(c.solver.rtol > 0.0) || !(c.solver.atol > 0.0))
            throw ConfigError("field 'solver': tolerances must be positive");
    }
    if (j.contains("decay")) {
        const Json& d = j["decay"];
        if (!d.is_object()) throw ConfigError("field 'decay' must be an object");
        c.decay.t_max = detail::number_field(d, "t_max", "field 'decay'", c.decay.t_max);
        c.decay.dt = detail::number_field(d, "dt", "field 'decay'", c.decay.dt);
        c.decay.grid_h = detail::number_field(d, "grid_h", "field 'decay'", c.decay.grid_h);
        c.decay.grid_half_width =
            detail::number_field(d, "grid_half_width", "field 'decay'", c.decay.grid_half_width);
        const double spd = detail::number_field(d, "samples_per_decade", "field 'decay'",
                                                static_cast<double>(c.decay.samples_per_decade));
        if (!(spd >= 1.0) || spd != std::floor(spd))
            throw ConfigError("field 'decay': samples_per_decade must be a positive integer");
        c.decay.samples_per_decade = static_cast<std::size_t>(spd);
        if (d.contains("crosscheck_times")) {
            if (!d["crosscheck_times"].is_array())
                throw ConfigError("field 'decay': crosscheck_times must be an array");
            c.decay.crosscheck_times.clear();
            for (const Json& t : d["crosscheck_times"]) {
                if (!t.is_number() || !(t.get<double>() > 0.0))
                    throw ConfigError("field 'decay': crosscheck_times must be positive numbers");
                c.decay.crosscheck_times.push_back(t.get<double>());
            }
        }
        if (!(c.decay.t_max > 0.0) || !(c.decay.dt > 0.0) || !(c.decay.grid_h > 0.0))
            throw ConfigError("field 'decay': t_max, dt, grid_h must be positive");
    }
    c.guard_radius = detail::number_field(j, "guard_radius", "config", c.guard_radius);
    if (!(c.guard_radius >= 0.0)) throw ConfigError("field 'guard_radius' must be >= 0");
    if (j.contains("out_dir")) {
        if (!j["out_dir"].is_string()) throw ConfigError("field 'out_dir' must be a string");
        c.out_dir = j["out_dir"].get<std::string>();
    }
    return c;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return config_from_json(j);
}

// FNV-1a over the canonical (sorted-key, compact) serialization.
inline std::uint64_t fnv1a_hash(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string config_hash_hex(const ExperimentConfig& c) {
    const std::string dump = to_json(c).dump();  // nlohmann objects are key-sorted
    const std::uint64_t h = fnv1a_hash(dump);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

struct ManifestOutput {
    std::string path;
    std::string checksum;
    std::uint64_t bytes = 0;
};

struct ManifestStage {
    std::string name;
    double seconds = 0.0;
};

struct RunManifest {
    std::string config_hash;
    std::string tool_version = kToolVersion;
    std::vector<ManifestOutput> outputs;
    std::vector<ManifestStage> stages;
    std::vector<std::string> skipped_points;  // guard-disc skips, "<grid>:<value>"

    Json to_json() const {
        Json j;
        j["schema_version"] = 1;
        j["config_hash"] = config_hash;
        j["tool_version"] = tool_version;
        j["outputs"] = Json::array();
        for (const ManifestOutput& o : outputs)
            j["outputs"].push_back(
                Json{{"path", o.path}, {"checksum", o.checksum}, {"bytes", o.bytes}});
        j["stages"] = Json::array();
        for (const ManifestStage& s : stages)
            j["stages"].push_back(Json{{"name", s.name}, {"seconds", s.seconds}});
        j["skipped_points"] = skipped_points;
        return j;
    }
};

}  // namespace scat1d
