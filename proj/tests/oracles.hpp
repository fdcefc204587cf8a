#pragma once

// Independent reference implementations used only by the tests.  Everything
// here is derived from closed forms or textbook algorithms and shares no code
// with the library under test.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

using Cplx = std::complex<double>;

// Fixed-panel composite Simpson rule (no adaptivity, no shared code).
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t panels = 4096) {
    const double h = (b - a) / static_cast<double>(2 * panels);
    double s = f(a) + f(b);
    for (std::size_t i = 1; i < 2 * panels; ++i)
        s += f(a + h * static_cast<double>(i)) * ((i % 2) ? 4.0 : 2.0);
    return s * h / 3.0;
}

// ---------------------------------------------------------------------------
// Square well V = -depth on [center - a, center + a]: plane-wave matching.
// Left incidence: psi = e^{ikx} + R e^{-ikx} (left), T e^{ikx} (right).
// ---------------------------------------------------------------------------

struct WellCoefficients {
    Cplx t;
    Cplx r_left;   // reflection for incidence from the left
    Cplx r_right;  // reflection for incidence from the right
};

inline WellCoefficients square_well_coefficients(double k, double depth, double a,
                                                 double center = 0.0) {
    const Cplx I(0.0, 1.0);
    const double q = std::sqrt(k * k + depth);
    const double s2 = std::sin(2.0 * q * a);
    const double c2 = std::cos(2.0 * q * a);
    const Cplx inv_t = std::exp(Cplx(0.0, 2.0 * k * a)) *
                       (c2 - I * (k * k + q * q) / (2.0 * k * q) * s2);
    WellCoefficients out;
    out.t = 1.0 / inv_t;
    const Cplx r0 = I * out.t * (q * q - k * k) / (2.0 * k * q) * s2;
    out.r_left = r0 * std::exp(Cplx(0.0, 2.0 * k * center));
    out.r_right = r0 * std::exp(Cplx(0.0, -2.0 * k * center));
    return out;
}

// Bound-state energy of the centered square well: even-state transcendental
// equation q tan(q a) = s with q = sqrt(depth - s^2), E = -s^2 (ground state).
inline double square_well_ground_energy(double depth, double a) {
    double lo = 1e-12, hi = std::sqrt(depth) - 1e-12;
    auto g = [&](double s) {
        const double q = std::sqrt(depth - s * s);
        return q * std::tan(q * a) - s;
    };
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (g(lo) * g(mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    const double s = 0.5 * (lo + hi);
    return -s * s;
}

// ---------------------------------------------------------------------------
// One-soliton well -2 rho^2 sech^2(rho x): exact scattering data.
// ---------------------------------------------------------------------------

inline Cplx soliton_transmission(double k, double rho) {
    return Cplx(k, rho) / Cplx(k, -rho);
}

inline Cplx soliton_jost_plus(double x, double k, double rho) {
    const Cplx I(0.0, 1.0);
    return std::exp(I * k * x) * (Cplx(k, 0.0) + I * rho * std::tanh(rho * x)) / Cplx(k, rho);
}

// ---------------------------------------------------------------------------
// Free Gaussian evolution: i psi_t = -psi_xx, psi(x,0) = pi^{-1/4} e^{-x^2/2}.
// ---------------------------------------------------------------------------

inline Cplx free_gaussian(double x, double t) {
    const Cplx denom(1.0, 2.0 * t);
    return std::pow(M_PI, -0.25) / std::sqrt(denom) * std::exp(-x * x / (2.0 * denom));
}

}  // namespace oracle
