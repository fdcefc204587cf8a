#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "scat1d/errors.hpp"
#include "scat1d/jost.hpp"
#include "scat1d/potential.hpp"
#include "scat1d/quadrature.hpp"
#include "scat1d/rootfind.hpp"
#include "scat1d/scattering.hpp"
#include "scat1d/tridiag.hpp"

namespace scat1d {

// A transmission pole at k = i s (s > 0), equivalently a bound state E = -s^2.
struct PoleResult {
    double s = 0.0;
    double energy = 0.0;
    double residual = 0.0;  // |W(is)| at the root
    std::pair<double, double> bracket{0.0, 0.0};
    int iterations = 0;  // root-functional evaluations
};

// Leading-order prediction for the edge pole / eigenvalue.  has_value is
// false when no microstructure is present (nothing is predicted).
struct Prediction {
    bool has_value = false;
    double pole_s = 0.0;
    double energy = 0.0;
    int remainder_order = 0;
};

namespace detail {

// g(s) = W[f+, f-](is).  For real V the Wronskian is real on the imaginary
// axis; a significant imaginary part indicates solver trouble.
template <typename Pot>
class ImagAxisWronskian {
  public:
    ImagAxisWronskian(const Pot& P, double epsilon, const SolverConfig& cfg)
        : P_(P), epsilon_(epsilon), cfg_(cfg) {}

    double operator()(double s) const {
        ++evals_;
        const Cplx k(0.0, s);
        const JostSolution fp = solve_jost(P_, epsilon_, k, Side::plus, cfg_);
        const JostSolution fm = solve_jost(P_, epsilon_, k, Side::minus, cfg_);
        const Cplx w = wronskian(fp, fm).value;
        if (std::abs(w.imag()) > 1e-9 * (1.0 + std::abs(w)))
            throw ConditioningError(
                "imaginary-axis Wronskian has a significant imaginary part", std::abs(w.imag()));
        return w.real();
    }

    int evals() const { return evals_; }

  private:
    const Pot& P_;
    double epsilon_;
    SolverConfig cfg_;
    mutable int evals_ = 0;
};

// Adaptive Simpson on unit-width panels: a narrow feature inside a wide
// integration window must not slip between the first coarse sample points.
template <typename F>
auto panelled_integral(F&& f, double lo, double hi, double tol) -> decltype(f(lo)) {
    decltype(f(lo)) acc{};
    double a = lo;
    while (a < hi) {
        const double b = std::min(a + 1.0, hi);
        acc += adaptive_simpson(f, a, b, tol);
        a = b;
    }
    return acc;
}

}  // namespace detail

// Find the transmission pole in a bracket on the positive imaginary axis by
// a sign-change scan plus Brent iteration on g(s) = W(is).
inline PoleResult find_pole(const TwoScalePotential& P, double epsilon,
                            std::pair<double, double> s_bracket, const SolverConfig& cfg = {}) {
    const auto [lo, hi] = s_bracket;
    if (!(lo > 0.0) || !(hi > lo))
        throw DomainError("find_pole: bracket must satisfy 0 < lo < hi");
    detail::ImagAxisWronskian g(P, epsilon, cfg);
    const auto cells = scan_sign_changes(g, lo, hi, 32);
    if (cells.empty())
        throw BracketError("find_pole: no sign change of W(is) on the bracket", {});
    if (cells.size() > 1)
        throw BracketError("find_pole: multiple sign changes on the bracket", cells);
    const double s = brent_root(g, cells.front().first, cells.front().second, 1e-15, 1e-13);
    PoleResult out;
    out.s = s;
    out.energy = -s * s;
    out.residual = std::abs(g(s));
    out.bracket = cells.front();
    out.iterations = g.evals();
    if (out.residual > 1e-9 * (1.0 + s))
        throw SolverError("find_pole: residual above tolerance at the located root", s);
    return out;
}

inline Prediction predicted_pole(const TwoScalePotential& P, double epsilon) {
    Prediction pred;
    const double mass = P.integral_lambda_eff();
    if (!(mass > 0.0)) return pred;  // no microstructure: nothing predicted
    pred.has_value = true;
    pred.pole_s = 0.5 * epsilon * epsilon * mass;
    pred.energy = -pred.pole_s * pred.pole_s;
    pred.remainder_order = 4;
    return pred;
}

inline Prediction predicted_eigenvalue(const TwoScalePotential& P, double epsilon) {
    Prediction pred = predicted_pole(P, epsilon);
    if (pred.has_value) pred.remainder_order = 5;
    return pred;
}

// Edge prediction for a well background: the effective-mass integral is
// weighted by tanh^2(rho (y - x0)).
inline Prediction soliton_predicted_eigenvalue(const TwoScalePotential& P, double epsilon,
                                               double rho, double x0) {
    Prediction pred;
    if (!P.has_microstructure()) return pred;
    const double R = P.support_radius();
    auto weighted = [&](double y) {
        const double th = std::tanh(rho * (y - x0));
        return th * th * P.lambda_eff(y);
    };
    const double mass = detail::panelled_integral(weighted, -R, R, 1e-12);
    if (!(mass > 0.0)) return pred;
    pred.has_value = true;
    pred.pole_s = 0.5 * epsilon * epsilon * mass;
    pred.energy = -pred.pole_s * pred.pole_s;
    pred.remainder_order = 5;
    return pred;
}

// Auto-bracketed edge-pole search: start from the prediction, widen the
// bracket geometrically while no sign change is found (ambiguity propagates).
inline PoleResult find_edge_pole(const TwoScalePotential& P, double epsilon,
                                 const SolverConfig& cfg = {}) {
    const Prediction pred = predicted_pole(P, epsilon);
    if (!pred.has_value)
        throw DomainError("find_edge_pole: no microstructure, no edge pole predicted");
    double lo = 0.25 * pred.pole_s;
    double hi = 4.0 * pred.pole_s;
    const double lo_cap = 1e-8;
    const double hi_cap = 0.5 * P.beta() * (1.0 - 1e-9);
    for (int attempt = 0; attempt < 10; ++attempt) {
        try {
            return find_pole(P, epsilon, {lo, hi}, cfg);
        } catch (const BracketError& err) {
            if (!err.sub_brackets.empty()) throw;  // genuine ambiguity
            const double new_lo = std::max(lo * 0.25, lo_cap);
            const double new_hi = std::min(hi * 4.0, hi_cap);
            if (new_lo == lo && new_hi == hi) throw;
            lo = new_lo;
            hi = new_hi;
        }
    }
    throw BracketError("find_edge_pole: no sign change after maximal widening", {});
}

// ---------------------------------------------------------------------------
// Independent finite-difference oracle: second-order central differences for
// -u'' + V u on [-L, L] with Dirichlet ends.  Shares nothing with the Jost
// machinery above.
// ---------------------------------------------------------------------------

struct FdEigenvalue {
    double value = 0.0;
    double grid_error = 0.0;  // (h^2/12) |<u, u''''>| leading-term estimate
};

struct FdSpectrum {
    std::vector<FdEigenvalue> states;  // ascending, all discrete eigenvalues < 0
    double h = 0.0;
    double L = 0.0;
};

namespace detail {

inline FdSpectrum fd_spectrum(const TwoScalePotential& P, double epsilon, double L, int n) {
    if (n < 3 || !(L > 0.0)) throw DomainError("fd_spectrum: need n >= 3 and L > 0");
    FdSpectrum out;
    out.L = L;
    const double h = 2.0 * L / (n + 1);
    out.h = h;
    SymTridiag T;
    T.d.resize(static_cast<std::size_t>(n));
    T.e.assign(static_cast<std::size_t>(n) - 1, -1.0 / (h * h));
    for (int i = 0; i < n; ++i) {
        const double x = -L + (i + 1) * h;
        T.d[static_cast<std::size_t>(i)] = 2.0 / (h * h) + P.eval_total(epsilon, x);
    }
    const std::vector<double> evs = tridiag_eigenvalues_below(T, 0.0, 1e-14);
    for (double lambda : evs) {
        const std::vector<double> u = inverse_iteration(T, lambda);
        // <u, u''''> ~ sum u_i (fourth difference)_i / h^4 with unit l2 norm
        double quartic = 0.0;
        const std::size_t m = u.size();
        auto at = [&u, m](std::ptrdiff_t i) {
            return (i < 0 || i >= static_cast<std::ptrdiff_t>(m)) ? 0.0
                                                                  : u[static_cast<std::size_t>(i)];
        };
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
            const double d4 =
                at(i - 2) - 4.0 * at(i - 1) + 6.0 * at(i) - 4.0 * at(i + 1) + at(i + 2);
            quartic += u[static_cast<std::size_t>(i)] * d4;
        }
        quartic /= h * h * h * h;
        FdEigenvalue ev;
        ev.value = lambda;
        ev.grid_error = (h * h / 12.0) * std::abs(quartic);
        out.states.push_back(ev);
    }
    return out;
}

}  // namespace detail

// All eigenvalues below zero that are resolved by the grid: an eigenvalue is
// reported only when it clears -10x its own grid-error estimate.
inline std::vector<double> fd_eigenvalues(const TwoScalePotential& P, double epsilon, double L,
                                          int n) {
    const FdSpectrum spec = detail::fd_spectrum(P, epsilon, L, n);
    std::vector<double> out;
    for (const FdEigenvalue& ev : spec.states)
        if (ev.value < -10.0 * ev.grid_error) out.push_back(ev.value);
    return out;
}

struct CheckedFdSpectrum {
    std::vector<FdEigenvalue> states;      // finer-grid states (filtered as above)
    std::vector<double> richardson;        // h^2-extrapolated values, same order
    std::vector<double> relative_shifts;   // |fine - coarse| / |fine| per state
    bool resolution_ok = true;             // all shifts <= 5% and counts agree
};

// Doubled-grid consistency check: recompute at 2n and flag any reported
// eigenvalue that moves by more than 5%.
inline CheckedFdSpectrum fd_eigenvalues_checked(const TwoScalePotential& P, double epsilon,
                                                double L, int n) {
    const FdSpectrum coarse = detail::fd_spectrum(P, epsilon, L, n);
    const FdSpectrum fine = detail::fd_spectrum(P, epsilon, L, 2 * n);
    CheckedFdSpectrum out;
    std::vector<FdEigenvalue> kept_fine, kept_coarse;
    for (const FdEigenvalue& ev : fine.states)
        if (ev.value < -10.0 * ev.grid_error) kept_fine.push_back(ev);
    for (const FdEigenvalue& ev : coarse.states)
        if (ev.value < -10.0 * ev.grid_error) kept_coarse.push_back(ev);
    out.states = kept_fine;
    out.resolution_ok = kept_fine.size() == kept_coarse.size();
    const std::size_t m = std::min(kept_fine.size(), kept_coarse.size());
    for (std::size_t i = 0; i < m; ++i) {
        const double vf = kept_fine[i].value, vc = kept_coarse[i].value;
        const double shift = std::abs(vf - vc) / std::abs(vf);
        out.relative_shifts.push_back(shift);
        out.richardson.push_back(vf + (vf - vc) / 3.0);
        if (shift > 0.05) out.resolution_ok = false;
    }
    return out;
}

// kappa* of the universal scaled limit for a NON-generic background:
// (i/2) t(0) * integral of f_-(y;0) Lambda(y) f_+(y;0) dy, evaluated as a
// Richardson-extrapolated limit along real k.
inline Cplx universal_limit_params(const TwoScalePotential& q_av,
                                   const TwoScalePotential& lambda_carrier,
                                   const SolverConfig& cfg = {}, double k0 = 1e-3) {
    const GenericityReport gen = genericity_indicator(q_av, 1.0, cfg);
    if (gen.generic)
        throw PreconditionError(
            "universal_limit_params: background is generic; the universal limit requires a "
            "non-generic background");
    if (!lambda_carrier.has_microstructure()) return Cplx(0.0, 0.0);
    const double R = lambda_carrier.support_radius();
    auto h_at = [&](double k) -> Cplx {
        const Cplx kc(k, 0.0);
        const JostSolution fp = solve_jost(q_av, 1.0, kc, Side::plus, cfg);
        const JostSolution fm = solve_jost(q_av, 1.0, kc, Side::minus, cfg);
        const Cplx w = wronskian(fp, fm).value;
        if (std::abs(w) <= 1e-12 * (1.0 + std::abs(kc)))
            throw PoleProximityError("universal_limit_params: Wronskian vanished at probe k");
        const Cplx t = Cplx(0.0, -2.0) * kc / w;
        auto integrand = [&](double y) {
            return fm.eval_m(y).first * lambda_carrier.lambda_eff(y) * fp.eval_m(y).first;
        };
        const Cplx integral = detail::panelled_integral(integrand, -R, R, 1e-12);
        return t * integral;
    };
    const Cplx h1 = h_at(k0);
    const Cplx h2 = h_at(0.5 * k0);
    return Cplx(0.0, 0.5) * (2.0 * h2 - h1);
}

}  // namespace scat1d
