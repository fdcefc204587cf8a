#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "scat1d/errors.hpp"
#include "scat1d/quadrature.hpp"

#include "../oracles.hpp"

using namespace scat1d;

TEST_CASE("adaptive Simpson reproduces elementary integrals", "[quadrature]") {
    auto cube = [](double x) { return x * x * x; };
    CHECK(std::abs(adaptive_simpson(cube, 0.0, 1.0, 1e-12) - 0.25) < 1e-12);

    auto osc = [](double x) { return std::cos(10.0 * x); };
    const double exact = std::sin(10.0) / 10.0;
    CHECK(std::abs(adaptive_simpson(osc, 0.0, 1.0, 1e-12) - exact) < 1e-11);
}

TEST_CASE("adaptive Simpson matches the independent fixed-panel rule", "[quadrature]") {
    auto f = [](double x) { return std::exp(-x * x) * std::cos(3.0 * x); };
    const double mine = adaptive_simpson(f, -4.0, 4.0, 1e-12);
    const double ref = oracle::simpson([&](double x) { return f(x); }, -4.0, 4.0, 1 << 14);
    CHECK(std::abs(mine - ref) < 1e-10);
}

TEST_CASE("adaptive Simpson reports failure at depth exhaustion", "[quadrature]") {
    auto wild = [](double x) { return std::cos(500.0 * x * x); };
    CHECK_THROWS_AS((adaptive_simpson(wild, 0.0, 3.0, 1e-14, 4)), QuadratureError);
}

TEST_CASE("16-point Gauss panels integrate smooth oscillations", "[quadrature]") {
    auto f = [](double x) { return std::sin(5.0 * x); };
    const double exact = (1.0 - std::cos(5.0)) / 5.0;
    CHECK(std::abs(gauss16_composite(f, 0.0, 1.0, 0.25) - exact) < 1e-14);
}

TEST_CASE("oscillation panel width shrinks with frequency", "[quadrature]") {
    CHECK(oscillation_panel_width(0.1, 0.0) <= 0.1);
    CHECK(oscillation_panel_width(0.0, 50.0) < oscillation_panel_width(0.0, 1.0));
    CHECK(oscillation_panel_width(0.1, 50.0) <= 0.25 * 0.1);
    CHECK(oscillation_panel_width(0.4, 1.0) <= 0.25 * 0.4);
}
