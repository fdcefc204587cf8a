#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "scat1d/errors.hpp"

namespace scat1d {

// Brent's method on a bracketing interval [a, b] with f(a) f(b) <= 0.
// Converges to |b - a| <= 2 * (xtol + rtol |b|) or |f| below ftol.
template <typename F>
double brent_root(F&& f, double a, double b, double xtol = 1e-14, double rtol = 1e-14,
                  double ftol = 0.0, int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw SolverError("brent_root: interval does not bracket a root", a);
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 2.0 * (xtol + rtol * std::abs(b));
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0 || std::abs(fb) <= ftol) return b;
        if (std::abs(e) < tol || std::abs(fa) <= std::abs(fb)) {
            d = m; e = m;  // bisection
        } else {
            double p, q;
            const double s = fb / fa;
            if (a == c) {  // secant
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {  // inverse quadratic
                const double qa = fa / fc, r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q; else p = -p;
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d; d = p / q;
            } else {
                d = m; e = m;  // interpolation rejected
            }
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) { c = a; fc = fa; e = d = b - a; }
    }
    throw SolverError("brent_root: iteration limit reached", b);
}

// Scan [a, b] at n+1 equispaced points and return every sign-change cell.
template <typename F>
std::vector<std::pair<double, double>> scan_sign_changes(F&& f, double a, double b,
                                                         std::size_t n = 32) {
    std::vector<std::pair<double, double>> cells;
    double x_prev = a, f_prev = f(a);
    for (std::size_t i = 1; i <= n; ++i) {
        const double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
        const double fx = f(x);
        if (f_prev == 0.0)
            cells.emplace_back(x_prev, x_prev);
        else if (fx != 0.0 && f_prev * fx < 0.0)
            cells.emplace_back(x_prev, x);
        x_prev = x;
        f_prev = fx;
    }
    if (f_prev == 0.0) cells.emplace_back(b, b);
    return cells;
}

// Golden-section minimizer for a unimodal scalar function on [a, b].
template <typename F>
double golden_min(F&& f, double a, double b, double tol = 1e-10, int max_iter = 200) {
    const double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iter && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace scat1d
