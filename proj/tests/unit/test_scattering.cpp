#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "scat1d/errors.hpp"
#include "scat1d/potential.hpp"
#include "scat1d/scattering.hpp"

#include "../oracles.hpp"

using namespace scat1d;

namespace {
// Frozen references (plane-wave matching oracle, recorded before the build):
// square well V = -1 on [-1, 1] at k = 1.
const Cplx kFrozenT(0.68490289995583, 0.720543951409831);
const Cplx kFrozenRPlus(-0.0784815096057669, 0.0745994930867553);
constexpr double kFrozenIZero = -0.909297426825682;  // -sin 2

TwoScalePotential shifted_box_well(double depth, double half_width, double center) {
    std::vector<std::pair<double, Envelope>> bg = {
        {1.0, Envelope::box(-depth, center, half_width)}};
    return TwoScalePotential(std::move(bg), {}, 1.0, 5.0);
}
}  // namespace

TEST_CASE("square-well transmission and reflection match the frozen fixture",
          "[scattering]") {
    const TwoScalePotential P = make_square_well(1.0, 1.0);
    const TransmissionResult r = transmission(P, 0.1, Cplx(1.0, 0.0), {}, true);
    CHECK(std::abs(r.t - kFrozenT) < 1e-7);
    CHECK(std::abs(r.r_plus - kFrozenRPlus) < 1e-7);
    // k/t must agree with (i/2) W
    CHECK(std::abs(r.k_over_t - Cplx(0.0, 0.5) * r.w) < 1e-12);
}

TEST_CASE("square-well coefficients match the matching oracle across k",
          "[scattering]") {
    const TwoScalePotential P = make_square_well(1.0, 1.0);
    for (double k : {0.6, 1.0, 2.3}) {
        const TransmissionResult got = transmission(P, 0.1, Cplx(k, 0.0), {}, true);
        const oracle::WellCoefficients want = oracle::square_well_coefficients(k, 1.0, 1.0);
        CHECK(std::abs(got.t - want.t) < 1e-7);
        CHECK(std::abs(got.r_plus - want.r_left) < 1e-7);
        CHECK(std::abs(got.r_minus - want.r_right) < 1e-7);
    }
}

TEST_CASE("left and right reflections carry the center-shift phases",
          "[scattering]") {
    // An off-center well distinguishes the two incidence directions: the left
    // coefficient picks up e^{+2ikc}, the right one e^{-2ikc}, t is unchanged.
    const double c = 0.7, k = 1.1;
    const TwoScalePotential P = shifted_box_well(1.0, 1.0, c);
    const TransmissionResult got = transmission(P, 0.1, Cplx(k, 0.0), {}, true);
    const oracle::WellCoefficients want = oracle::square_well_coefficients(k, 1.0, 1.0, c);
    const oracle::WellCoefficients centered = oracle::square_well_coefficients(k, 1.0, 1.0);
    CHECK(std::abs(got.t - want.t) < 1e-7);
    CHECK(std::abs(got.t - centered.t) < 1e-7);  // t is shift-invariant
    CHECK(std::abs(got.r_plus - want.r_left) < 1e-7);
    CHECK(std::abs(got.r_minus - want.r_right) < 1e-7);
    // and the shift really does change the phases
    CHECK(std::abs(got.r_plus - centered.r_left) > 1e-3);
}

TEST_CASE("real potentials scatter unitarily", "[scattering]") {
    const TwoScalePotential P = make_square_well(1.0, 1.0);
    for (double k : {0.4, 1.0, 3.1}) {
        const TransmissionResult r = transmission(P, 0.1, Cplx(k, 0.0), {}, true);
        const double sum = std::norm(r.t) + std::norm(r.r_plus);
        CHECK(std::abs(sum - 1.0) < 1e-7);
        CHECK(std::abs(std::abs(r.r_minus) - std::abs(r.r_plus)) < 1e-7);
    }
}

TEST_CASE("transmission at -k is the conjugate for real potentials", "[scattering]") {
    const TwoScalePotential P = make_square_well(1.0, 1.0);
    const Cplx t_pos = transmission(P, 0.1, Cplx(1.3, 0.0)).t;
    const Cplx t_neg = transmission(P, 0.1, Cplx(-1.3, 0.0)).t;
    CHECK(std::abs(t_neg - std::conj(t_pos)) < 1e-7);
}

TEST_CASE("reflectionless well transmits with unit modulus", "[scattering]") {
    const TwoScalePotential P = make_soliton(1.0, 0.0);
    const TransmissionResult r = transmission(P, 0.1, Cplx(1.0, 0.0), {}, true);
    CHECK(std::abs(r.t - Cplx(0.0, 1.0)) < 1e-7);       // frozen: t(1) = i
    CHECK(std::abs(r.w - Cplx(-2.0, 0.0)) < 1e-6);      // frozen: W(1) = -2
    CHECK(std::abs(r.r_plus) < 1e-6);
    CHECK(std::abs(r.r_minus) < 1e-6);
    const Cplx want = oracle::soliton_transmission(2.0, 1.0);
    CHECK(std::abs(transmission(P, 0.1, Cplx(2.0, 0.0)).t - want) < 1e-7);
}

TEST_CASE("zero-momentum transmission limits are resolved by extrapolation",
          "[scattering]") {
    const TwoScalePotential sol = make_soliton(1.0, 0.0);
    CHECK(std::abs(transmission_at_zero(sol, 0.1) - Cplx(-1.0, 0.0)) < 1e-5);
    // generic wells transmit nothing at zero momentum
    const TwoScalePotential well = make_square_well(1.0, 1.0);
    CHECK(std::abs(transmission_at_zero(well, 0.1)) < 1e-4);
}

TEST_CASE("reflection requests off the real axis are refused", "[scattering]") {
    const TwoScalePotential P = make_square_well(1.0, 1.0);
    CHECK_THROWS_AS(transmission(P, 0.1, Cplx(1.0, 0.5), {}, true), DomainError);
    CHECK_THROWS_AS(transmission(P, 0.1, Cplx(0.0, 0.0), {}, true), DomainError);
}

TEST_CASE("the Wronskian identity holds at zero momentum", "[scattering]") {
    const TwoScalePotential P = make_square_well(1.0, 1.0);
    const IntegralResult res = i_integral(P, 0.1, Cplx(0.0, 0.0));
    CHECK(std::abs(res.value - Cplx(kFrozenIZero, 0.0)) < 1e-7);
    CHECK(res.identity_residual < 1e-7);
}

TEST_CASE("the Wronskian identity holds at real momentum", "[scattering]") {
    const TwoScalePotential P = make_square_well(1.0, 1.0);
    const IntegralResult res = i_integral(P, 0.1, Cplx(1.0, 0.0));
    CHECK(res.identity_residual < 1e-7);
}

TEST_CASE("two-potential comparison identity closes", "[scattering]") {
    const TwoScalePotential V = make_square_well(1.0, 1.0);
    const TwoScalePotential W = make_square_well(0.5, 1.0);
    const ComparisonResult res = comparison_integral(V, 0.1, W, 0.1, Cplx(1.0, 0.0));
    CHECK(res.identity_residual < 1e-7);
    CHECK(std::abs(res.delta_k_over_t) > 1e-3);  // the two wells genuinely differ
}

TEST_CASE("scaled transmission approaches the point-interaction law", "[scattering]") {
    const TwoScalePotential P = make_bump_cosine(10.0);
    const double mass = P.integral_lambda_eff();
    CHECK(std::abs(mass - 1.24546634919352) < 1e-9);
    const Cplx kappa(1.0, 0.0);
    const Cplx scaled = scaled_transmission(P, 0.1, kappa);
    const Cplx dirac = dirac_transmission(kappa, mass);
    CHECK(std::abs(scaled - dirac) < 0.1);
    CHECK(std::abs(scaled) < 1.0 + 1e-9);
}

TEST_CASE("the scaled-pole guard disc rejects nearby evaluation points", "[scattering]") {
    const TwoScalePotential P = make_bump_cosine(10.0);
    const double mass = P.integral_lambda_eff();
    CHECK_THROWS_AS(scaled_transmission(P, 0.1, Cplx(0.0, 0.5 * mass), {}, 1e-3),
                    PoleProximityError);
    CHECK_THROWS_AS(scaled_transmission(P, 0.1, Cplx(5e-4, 0.5 * mass), {}, 1e-3),
                    PoleProximityError);
}

TEST_CASE("point-interaction transmission has the closed form", "[scattering]") {
    CHECK(std::abs(dirac_transmission(Cplx(1.0, 0.0), 2.0) - Cplx(0.5, 0.5)) < 1e-15);
    CHECK_THROWS_AS(dirac_transmission(Cplx(0.0, 1.0), 2.0), PoleProximityError);
}

TEST_CASE("genericity indicator separates the two backgrounds", "[scattering]") {
    const GenericityReport well = genericity_indicator(make_square_well(1.0, 1.0), 0.1);
    CHECK(well.generic);
    CHECK(std::abs(well.i_zero - Cplx(kFrozenIZero, 0.0)) < 1e-6);
    CHECK(well.abs_t_at_k0 < 0.01);

    const GenericityReport sol = genericity_indicator(make_soliton(1.0, 0.0), 0.1);
    CHECK_FALSE(sol.generic);
    CHECK(std::abs(sol.abs_t_at_k0 - 1.0) < 1e-6);
}
