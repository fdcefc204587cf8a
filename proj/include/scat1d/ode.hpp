#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "scat1d/errors.hpp"

namespace scat1d {

using Cplx = std::complex<double>;
using OdeState = std::array<Cplx, 2>;

struct OdeTrace {
    std::vector<double> x;          // accepted nodes, in integration order
    std::vector<OdeState> y;        // state at nodes
    std::vector<OdeState> dy;       // rhs at nodes (for Hermite interpolation)
    long accepted = 0;
    long rejected = 0;
};

// Adaptive embedded Dormand-Prince 5(4) for a 2-component complex first-order
// system y' = rhs(x, y).  Integrates from x0 to x1 (either direction), never
// stepping across a listed breakpoint, with |h| <= h_max throughout.  Error
// control is per-component: atol + rtol * |y|.
template <class RHS>
OdeTrace integrate_dp45(RHS&& rhs, double x0, double x1, const OdeState& y0, double rtol,
                        double atol, double h_max,
                        const std::vector<double>& breakpoints = {}) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

    if (!(h_max > 0.0)) throw DomainError("integrate_dp45: h_max must be > 0");
    const double dir = (x1 >= x0) ? 1.0 : -1.0;
    OdeTrace tr;
    if (x0 == x1) {
        OdeState d;
        rhs(x0, y0, d);
        tr.x.push_back(x0);
        tr.y.push_back(y0);
        tr.dy.push_back(d);
        return tr;
    }

    // segment targets: interior breakpoints in integration order, then x1.
    std::vector<double> targets;
    for (double b : breakpoints)
        if (dir * (b - x0) > 0.0 && dir * (x1 - b) > 0.0) targets.push_back(b);
    std::sort(targets.begin(), targets.end());
    if (dir < 0) std::reverse(targets.begin(), targets.end());
    targets.push_back(x1);

    const std::size_t estimate =
        static_cast<std::size_t>(std::min(std::abs(x1 - x0) / h_max + 64.0, 4.0e7));
    tr.x.reserve(estimate);
    tr.y.reserve(estimate);
    tr.dy.reserve(estimate);

    double x = x0;
    OdeState y = y0;
    OdeState k1, k2, k3, k4, k5, k6, k7;
    rhs(x, y, k1);
    tr.x.push_back(x);
    tr.y.push_back(y);
    tr.dy.push_back(k1);

    const long max_steps = 80'000'000;
    long total = 0;
    double h = dir * h_max;

    for (double target : targets) {
        while (dir * (target - x) > 0.0) {
            if (++total > max_steps)
                throw SolverError("integrate_dp45: step budget exhausted", x);
            h = dir * std::min(std::abs(h), h_max);
            if (dir * (x + h - target) > 0.0) h = target - x;
            if (std::abs(h) < 16.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(x)))
                throw SolverError("integrate_dp45: step size underflow", x);

            OdeState yt;
            rhs(x, y, k1);
            for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a21 * k1[i]);
            rhs(x + c2 * h, yt, k2);
            for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
            rhs(x + c3 * h, yt, k3);
            for (int i = 0; i < 2; ++i)
                yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            rhs(x + c4 * h, yt, k4);
            for (int i = 0; i < 2; ++i)
                yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            rhs(x + c5 * h, yt, k5);
            for (int i = 0; i < 2; ++i)
                yt[i] = y[i] +
                        h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            rhs(x + h, yt, k6);
            OdeState y5;
            for (int i = 0; i < 2; ++i)
                y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            rhs(x + h, y5, k7);

            double err = 0.0;
            for (int i = 0; i < 2; ++i) {
                const Cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                    e6 * k6[i] + e7 * k7[i]);
                const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
                const double q = std::abs(e) / sc;
                err += 0.5 * q * q;
            }
            err = std::sqrt(err);

            if (std::isfinite(err) && err <= 1.0) {
                // accepted
                x += h;
                y = y5;
                tr.x.push_back(x);
                tr.y.push_back(y);
                tr.dy.push_back(k7);
                ++tr.accepted;
            } else {
                ++tr.rejected;
            }
            double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
            if (std::isnan(err) || std::isinf(err)) fac = 0.2;
            fac = std::clamp(fac, 0.2, 5.0);
            h *= fac;
        }
        // landed exactly on the target (segment boundary); force a fresh rhs
        // evaluation at the start of the next segment (piecewise potentials).
    }
    return tr;
}

}  // namespace scat1d
