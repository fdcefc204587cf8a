#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "scat1d/errors.hpp"
#include "scat1d/potential.hpp"
#include "scat1d/timedecay.hpp"

#include "../oracles.hpp"

using namespace scat1d;

namespace {
constexpr double kFrozenWellEnergy = -0.453753165860328;  // V = -1 on [-1, 1]
}

TEST_CASE("symmetric grids are odd, centered, and validated", "[timedecay]") {
    const UniformGrid g = make_symmetric_grid(10.0, 0.1);
    CHECK(g.n % 2 == 1);
    CHECK(std::abs(g.x((g.n - 1) / 2)) < 1e-14);
    CHECK(g.half_width() >= 10.0 - 1e-12);
    CHECK(std::abs(g.x0 + g.half_width()) < 1e-12);
    CHECK_THROWS_AS(make_symmetric_grid(-1.0, 0.1), ConstructionError);
    CHECK_THROWS_AS(make_symmetric_grid(1.0, 2.0), ConstructionError);
}

TEST_CASE("the Gaussian packet has unit mass and the closed-form weighted size",
          "[timedecay]") {
    const InitialState st = gaussian_state(20.0, 0.01);
    CHECK(std::abs(st.l2_norm() - 1.0) < 1e-8);
    // integral of (1 + |y|^3) |psi| = pi^{-1/4} (sqrt(2 pi) + 4)
    const double want = std::pow(kPi, -0.25) * (std::sqrt(2.0 * kPi) + 4.0);
    CHECK(std::abs(st.weight_norm_3 - want) < 1e-4);

    const DecayMetricsRow row = field_metrics(st.grid, st.psi, 0.0);
    const double peak = std::pow(kPi, -0.25);
    CHECK(std::abs(row.weighted_sup_p1 - peak) < 1e-10);
    CHECK(std::abs(row.weighted_sup_p3 - peak) < 1e-10);
    CHECK(std::abs(row.l2_norm - 1.0) < 1e-8);
}

TEST_CASE("free propagation matches the closed form", "[timedecay]") {
    const TwoScalePotential zero = make_zero();
    const InitialState st = gaussian_state(40.0, 0.01);
    CnConfig cfg;
    cfg.dt = 1e-3;
    cfg.snapshot_times = {1.0};
    const DecayField field = evolve_crank_nicolson(zero, 0.1, st, {0.0, 1.0}, cfg);
    REQUIRE(field.snapshots.size() == 1);
    REQUIRE(field.metrics.size() == 2);
    double worst = 0.0;
    for (std::size_t i = 0; i < field.grid.n; ++i) {
        const Cplx want = oracle::free_gaussian(field.grid.x(i), 1.0);
        worst = std::max(worst, std::abs(field.snapshots[0][i] - want));
    }
    CHECK(worst < 1e-4);
    // unitary propagation conserves the mass
    CHECK(std::abs(field.metrics.back().l2_norm - 1.0) < 1e-8);
    // the packet has spread: the weighted sup has dropped
    CHECK(field.metrics[1].weighted_sup_p3 < field.metrics[0].weighted_sup_p3);
}

TEST_CASE("propagation rejects bad time lists", "[timedecay]") {
    const TwoScalePotential zero = make_zero();
    const InitialState st = gaussian_state(10.0, 0.05);
    CHECK_THROWS_AS(evolve_crank_nicolson(zero, 0.1, st, {}), DomainError);
    CHECK_THROWS_AS(evolve_crank_nicolson(zero, 0.1, st, {1.0, 0.5}), DomainError);
    CHECK_THROWS_AS(evolve_crank_nicolson(zero, 0.1, st, {-1.0}), DomainError);
}

TEST_CASE("wall reflections on an undersized domain are refused", "[timedecay]") {
    const TwoScalePotential zero = make_zero();
    const InitialState st = gaussian_state(10.0, 0.05);
    CnConfig cfg;
    cfg.dt = 0.05;
    CHECK_THROWS_AS(evolve_crank_nicolson(zero, 0.1, st, {20.0}, cfg), DomainError);
}

TEST_CASE("grid bound states reproduce the frozen well energy", "[timedecay]") {
    const UniformGrid g = make_symmetric_grid(15.0, 0.01);
    const TwoScalePotential well = make_square_well(1.0, 1.0);
    const std::vector<DiscreteBoundState> bs = bound_states_on_grid(well, 0.1, g);
    REQUIRE(bs.size() == 1);
    // node-on-edge sampling of the discontinuous well limits the scheme to
    // first order in h here (smooth potentials keep the h^2 rate)
    CHECK(std::abs(bs[0].energy - kFrozenWellEnergy) < 5e-3);
    CHECK(bs[0].u.front() == 0.0);
    CHECK(bs[0].u.back() == 0.0);
    double nrm = 0.0;
    for (double v : bs[0].u) nrm += v * v;
    CHECK(std::abs(g.h * nrm - 1.0) < 1e-12);

    const TwoScalePotential sol = make_soliton(1.0, 0.0);
    const std::vector<DiscreteBoundState> sb = bound_states_on_grid(sol, 0.1, g);
    REQUIRE(sb.size() == 1);
    CHECK(std::abs(sb[0].energy + 1.0) < 2e-4);

    const TwoScalePotential barrier = make_square_well(-1.0, 1.0);
    CHECK(bound_states_on_grid(barrier, 0.1, g).empty());
}

TEST_CASE("continuum projection removes every bound component", "[timedecay]") {
    const UniformGrid g = make_symmetric_grid(15.0, 0.01);
    const TwoScalePotential well = make_square_well(1.0, 1.0);
    const std::vector<DiscreteBoundState> bs = bound_states_on_grid(well, 0.1, g);
    REQUIRE(bs.size() == 1);
    const InitialState st = gaussian_state(15.0, 0.01);
    const InitialState proj = project_continuum(st, bs);
    Cplx overlap(0.0, 0.0);
    for (std::size_t i = 0; i < proj.psi.size(); ++i) overlap += bs[0].u[i] * proj.psi[i];
    CHECK(std::abs(overlap) * g.h < 1e-12);
    CHECK(proj.weight_norm_3 > 0.0);
    CHECK(proj.l2_norm() < st.l2_norm());

    // mismatched grids and unnormalized modes are rejected
    DiscreteBoundState wrong_grid;
    wrong_grid.energy = -1.0;
    wrong_grid.u.assign(17, 0.1);
    CHECK_THROWS_AS(project_continuum(st, {wrong_grid}), PreconditionError);
    DiscreteBoundState unnormalized = bs[0];
    for (double& v : unnormalized.u) v *= 2.0;
    CHECK_THROWS_AS(project_continuum(st, {unnormalized}), PreconditionError);
}

TEST_CASE("spectral evolution of the free packet matches the closed form",
          "[timedecay]") {
    const TwoScalePotential zero = make_zero();
    const InitialState st = gaussian_state(12.0, 0.01);
    const DecayField field = evolve_distorted(zero, 0.1, st, {1.0, 5.0});
    REQUIRE(field.snapshots.size() == 2);
    CHECK(std::string(method_label(field.method)) == "distorted_ft");
    for (std::size_t it = 0; it < 2; ++it) {
        const double t = field.snapshot_times[it];
        double worst = 0.0;
        for (std::size_t i = 0; i < field.grid.n; ++i) {
            const Cplx want = oracle::free_gaussian(field.grid.x(i), t);
            worst = std::max(worst, std::abs(field.snapshots[it][i] - want));
        }
        CHECK(worst < 5e-6);
    }
    // the metrics decay like the dispersive estimate: t^{-1/2} within a factor
    const double ratio = field.metrics[0].weighted_sup_p3 / field.metrics[1].weighted_sup_p3;
    CHECK(ratio > 1.2);
}

TEST_CASE("spectral evolution validates its configuration", "[timedecay]") {
    const TwoScalePotential zero = make_zero();
    const InitialState st = gaussian_state(12.0, 0.01);
    CHECK_THROWS_AS(evolve_distorted(zero, 0.1, st, {}), DomainError);
    CHECK_THROWS_AS(evolve_distorted(zero, 0.1, st, {-2.0}), DomainError);
    DistortedConfig cfg;
    cfg.k_max = 0.5;  // far below the packet's spectral content
    CHECK_THROWS_AS(evolve_distorted(zero, 0.1, st, {1.0}, cfg), PreconditionError);
}

TEST_CASE("decay CSV rows carry the method label", "[timedecay]") {
    DecayField field;
    field.method = EvolveMethod::crank_nicolson;
    field.metrics.push_back({1.0, 0.5, 0.25, 0.125, 1.0});
    std::ostringstream os;
    write_decay_csv(os, field);
    const std::string text = os.str();
    CHECK(text.find("t,weighted_sup_p1,weighted_sup_p2,weighted_sup_p3,l2_norm,method") == 0);
    CHECK(text.find("crank_nicolson") != std::string::npos);
    CHECK(decay_metrics(field).size() == 1);
    const DecayField empty;
    CHECK_THROWS_AS(decay_metrics(empty), DomainError);
}

TEST_CASE("crossover fits recover synthetic two-regime data", "[timedecay]") {
    const double eps = 0.3, mass = 1.24546634919352;
    const double c_true = 0.0126, amp = 0.4;
    std::vector<DecayMetricsRow> rows;
    for (int i = 0; i <= 48; ++i) {
        const double t = 0.5 * std::pow(1000.0 / 0.5 * 2.0, i / 48.0);
        DecayMetricsRow r;
        r.t = t;
        r.weighted_sup_p3 = amp / std::sqrt(t) / (1.0 + c_true * t);
        rows.push_back(r);
    }
    const CrossoverFit fit = fit_crossover(rows, eps, mass);
    CHECK(std::abs(fit.c / c_true - 1.0) < 0.05);
    CHECK(std::abs(fit.early_exponent + 0.5) < 0.08);
    CHECK(fit.n_samples == rows.size());
    CHECK(fit.n_early >= 3);
}

TEST_CASE("crossover fits reject insufficient coverage", "[timedecay]") {
    auto make_rows = [](double t_lo, double t_hi, int n) {
        std::vector<DecayMetricsRow> rows;
        for (int i = 0; i <= n; ++i) {
            const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / n);
            DecayMetricsRow r;
            r.t = t;
            r.weighted_sup_p3 = 0.4 / std::sqrt(t);
            rows.push_back(r);
        }
        return rows;
    };
    const double mass = 1.24546634919352;
    // too few samples
    CHECK_THROWS_AS(fit_crossover(make_rows(1.0, 1000.0, 3), 0.3, mass), FitError);
    // span too narrow
    CHECK_THROWS_AS(fit_crossover(make_rows(1.0, 50.0, 30), 0.3, mass), FitError);
    // span does not straddle the predicted crossover time
    CHECK_THROWS_AS(fit_crossover(make_rows(0.5, 500.0, 30), 0.05, mass), FitError);
}
