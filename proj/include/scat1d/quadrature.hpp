#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <type_traits>
#include <utility>

#include "scat1d/errors.hpp"

namespace scat1d {

namespace detail {

template <class F>
using integrand_result_t = std::decay_t<decltype(std::declval<F&>()(0.0))>;

inline double magnitude(double v) { return std::abs(v); }
template <class T>
double magnitude(const T& v) {
    return std::abs(v);
}

template <class F, class T>
struct SimpsonCtx {
    F& f;
    double abs_tol;
    int max_depth;
    double unconverged = 0.0;  // accumulated error on leaves that hit max depth

    T recurse(double a, double b, T fa, T fm, T fb, T whole, double tol, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const T flm = f(lm);
        const T frm = f(rm);
        const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const T correction = (left + right - whole) * (1.0 / 15.0);
        if (magnitude(correction) <= tol || depth <= 0) {
            if (depth <= 0 && magnitude(correction) > tol)
                unconverged += magnitude(correction);
            return left + right + correction;
        }
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
};

}  // namespace detail

// Adaptive Simpson quadrature with Richardson correction.  `abs_tol` is an
// absolute error target; throws QuadratureError (with the achieved estimate)
// if refinement bottoms out before reaching it.
template <class F>
detail::integrand_result_t<F> adaptive_simpson(F&& f, double a, double b,
                                               double abs_tol, int max_depth = 48) {
    using T = detail::integrand_result_t<F>;
    if (!(b > a)) {
        if (a == b) return T{};
        throw DomainError("adaptive_simpson: requires a < b");
    }
    detail::SimpsonCtx<F, T> ctx{f, abs_tol, max_depth};
    const double m = 0.5 * (a + b);
    const T fa = f(a), fm = f(m), fb = f(b);
    const T whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    T result = ctx.recurse(a, b, fa, fm, fb, whole, abs_tol, max_depth);
    if (ctx.unconverged > abs_tol)
        throw QuadratureError("adaptive_simpson: did not converge to requested tolerance",
                              ctx.unconverged);
    return result;
}

// 16-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre16 {
    static constexpr std::array<double, 8> abscissa = {
        0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
        0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
        0.9445750230732326, 0.9894009349916499};
    static constexpr std::array<double, 8> weight = {
        0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
        0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
        0.0622535239386479, 0.0271524594117541};
};

// Integrate f over one panel [a, b] with the 16-point Gauss-Legendre rule.
template <class F>
detail::integrand_result_t<F> gauss16_panel(F&& f, double a, double b) {
    using T = detail::integrand_result_t<F>;
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T acc{};
    for (std::size_t i = 0; i < 8; ++i) {
        const double dx = h * GaussLegendre16::abscissa[i];
        acc += GaussLegendre16::weight[i] * (f(c - dx) + f(c + dx));
    }
    return acc * h;
}

// Composite Gauss-Legendre quadrature with a fixed panel width cap.  Intended
// for integrands with a known oscillation scale: pick `panel_width` a fraction
// of the shortest wavelength (e.g. epsilon/4 for e^{2 pi i x/epsilon} factors).
template <class F>
detail::integrand_result_t<F> gauss16_composite(F&& f, double a, double b,
                                                double panel_width) {
    using T = detail::integrand_result_t<F>;
    if (!(b > a)) {
        if (a == b) return T{};
        throw DomainError("gauss16_composite: requires a < b");
    }
    if (!(panel_width > 0.0))
        throw DomainError("gauss16_composite: panel width must be positive");
    const double span = b - a;
    const std::size_t n = static_cast<std::size_t>(std::ceil(span / panel_width));
    const double w = span / static_cast<double>(n);
    T acc{};
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = a + w * static_cast<double>(i);
        const double hi = (i + 1 == n) ? b : lo + w;
        acc += gauss16_panel(f, lo, hi);
    }
    return acc;
}

// Panel width suited to integrands combining a microstructure oscillation of
// period `eps_micro` (pass 0 if absent) and a plane-wave factor of wave
// number |k|.
inline double oscillation_panel_width(double eps_micro, double k_abs) {
    double w = 0.1;
    if (eps_micro > 0.0) w = std::min(w, 0.25 * eps_micro);
    w = std::min(w, 3.141592653589793 / (2.0 * (1.0 + k_abs)));
    return w;
}

}  // namespace scat1d
