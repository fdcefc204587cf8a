#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <ostream>
#include <vector>

#include "scat1d/errors.hpp"
#include "scat1d/jost.hpp"
#include "scat1d/potential.hpp"
#include "scat1d/quadrature.hpp"

namespace scat1d {

// Scattering data at one wave number.  Conventions (validated against plane
// waves and the reflectionless closed forms):
//   W[f+, f-] = -2ik / t           =>  k/t = (i/2) W   (finite at k = 0)
//   r+ = t W[f+(k), f-(-k)] / W[f-(k), f-(-k)]   (incidence from the left)
//   r- = t W[f-(k), f+(-k)] / W[f+(k), f+(-k)]   (incidence from the right)
struct TransmissionResult {
    Cplx k{0.0, 0.0};
    Cplx t{0.0, 0.0};
    Cplx k_over_t{0.0, 0.0};
    Cplx w{0.0, 0.0};  // W[f+, f-]
    double wronskian_drift = 0.0;
    bool has_reflection = false;
    Cplx r_plus{0.0, 0.0};
    Cplx r_minus{0.0, 0.0};
};

inline TransmissionResult transmission(const TwoScalePotential& P, double epsilon, Cplx k,
                                       const SolverConfig& cfg = {},
                                       bool with_reflection = false) {
    const JostSolution fp = solve_jost(P, epsilon, k, Side::plus, cfg);
    const JostSolution fm = solve_jost(P, epsilon, k, Side::minus, cfg);
    const WronskianEstimate west = wronskian(fp, fm);

    TransmissionResult out;
    out.k = k;
    out.w = west.value;
    out.wronskian_drift = west.drift;
    out.k_over_t = Cplx(0.0, 0.5) * west.value;
    if (std::abs(west.value) <= 1e-12 * (1.0 + std::abs(k)))
        throw PoleProximityError(
            "transmission: Wronskian vanishes (transmission pole or zero-energy resonance)");
    out.t = Cplx(0.0, -2.0) * k / west.value;

    if (with_reflection) {
        if (k.imag() != 0.0)
            throw DomainError("transmission: reflection coefficients are restricted to real k");
        if (k.real() == 0.0)
            throw DomainError("transmission: reflection at k = 0 is not defined pointwise");
        const JostSolution fp_neg = solve_jost(P, epsilon, -k, Side::plus, cfg);
        const JostSolution fm_neg = solve_jost(P, epsilon, -k, Side::minus, cfg);
        const Cplx w_pp = wronskian(fp, fp_neg).value;  // -> -2ik
        const Cplx w_mm = wronskian(fm, fm_neg).value;  // -> +2ik
        const Cplx w_pm = wronskian(fp, fm_neg).value;
        const Cplx w_mp = wronskian(fm, fp_neg).value;
        out.r_plus = out.t * w_pm / w_mm;
        out.r_minus = out.t * w_mp / w_pp;
        out.has_reflection = true;
    }
    return out;
}

// t(0) as a limit: Richardson extrapolation in k over k0 and k0/2.
inline Cplx transmission_at_zero(const TwoScalePotential& P, double epsilon,
                                 const SolverConfig& cfg = {}, double k0 = 1e-3) {
    const Cplx t1 = transmission(P, epsilon, Cplx(k0, 0.0), cfg).t;
    const Cplx t2 = transmission(P, epsilon, Cplx(0.5 * k0, 0.0), cfg).t;
    return 2.0 * t2 - t1;
}

namespace detail {

// Composite Gauss panels over [a, b] split at the potential's breakpoints,
// refined (panel halving) until two successive refinements agree.
template <typename F>
Cplx refine_panels(F&& f, double a, double b, const std::vector<double>& breakpoints,
                   double panel0, double tol) {
    if (!(b > a)) return Cplx(0.0, 0.0);
    std::vector<double> cuts;
    cuts.push_back(a);
    for (double c : breakpoints)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    auto total = [&](double w) {
        Cplx s{0.0, 0.0};
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            s += gauss16_composite(f, cuts[i], cuts[i + 1], w);
        return s;
    };
    double w = panel0;
    Cplx coarse = total(w);
    std::vector<double> trace;
    for (int pass = 0; pass < 5; ++pass) {
        w *= 0.5;
        const Cplx fine = total(w);
        const double diff = std::abs(fine - coarse);
        trace.push_back(diff);
        if (diff <= tol * (1.0 + std::abs(fine))) return fine;
        coarse = fine;
    }
    std::string msg = "oscillatory quadrature failed to settle; refinement trace:";
    for (double d : trace) msg += " " + std::to_string(d);
    throw QuadratureError(msg, trace.back());
}

}  // namespace detail

struct IntegralResult {
    Cplx value{0.0, 0.0};
    double identity_residual = 0.0;  // |W - (-2ik + I)|
};

// I(k) = integral of V(y) e^{-iky} f_+(y;k) dy = integral of V(y) m_+(y;k) dy.
// The Wronskian identity W[f+, f-] = -2ik + I(k) is evaluated as a recorded
// consistency residual.
inline IntegralResult i_integral(const TwoScalePotential& P, double epsilon, Cplx k,
                                 const SolverConfig& cfg = {}, double quad_tol = 1e-9) {
    const JostSolution fp = solve_jost(P, epsilon, k, Side::plus, cfg);
    const JostSolution fm = solve_jost(P, epsilon, k, Side::minus, cfg);
    const double R = P.support_radius();
    IntegralResult out;
    if (R > 0.0) {
        auto integrand = [&](double y) { return P.eval_total(epsilon, y) * fp.eval_m(y).first; };
        const double panel = oscillation_panel_width(
            P.has_microstructure() ? epsilon : 0.0, std::abs(k));
        out.value = detail::refine_panels(integrand, -R, R, P.breakpoints(), panel, quad_tol);
    }
    const Cplx w = wronskian(fp, fm).value;
    out.identity_residual = std::abs(w - (Cplx(0.0, -2.0) * k + out.value));
    return out;
}

struct ComparisonResult {
    Cplx k{0.0, 0.0};
    Cplx i_vw{0.0, 0.0};             // integral of f_-^W (V - W) f_+^V
    Cplx delta_k_over_t{0.0, 0.0};   // k/t^V - k/t^W, via Wronskians
    double identity_residual = 0.0;  // |delta_k_over_t - (i/2) i_vw|
};

// Two-potential comparison identity: k/t^V - k/t^W = (i/2) * i_vw, with both
// sides computed independently and the mismatch recorded.
inline ComparisonResult comparison_integral(const TwoScalePotential& V, double eps_v,
                                            const TwoScalePotential& W, double eps_w, Cplx k,
                                            const SolverConfig& cfg = {},
                                            double quad_tol = 1e-9) {
    const JostSolution fpV = solve_jost(V, eps_v, k, Side::plus, cfg);
    const JostSolution fmV = solve_jost(V, eps_v, k, Side::minus, cfg);
    const JostSolution fpW = solve_jost(W, eps_w, k, Side::plus, cfg);
    const JostSolution fmW = solve_jost(W, eps_w, k, Side::minus, cfg);

    ComparisonResult out;
    out.k = k;
    const double R = std::max(V.support_radius(), W.support_radius());
    if (R > 0.0) {
        auto integrand = [&](double y) {
            const double dv = V.eval_total(eps_v, y) - W.eval_total(eps_w, y);
            return fmW.eval_m(y).first * dv * fpV.eval_m(y).first;
        };
        const double micro = std::min(V.has_microstructure() ? eps_v : 1e300,
                                      W.has_microstructure() ? eps_w : 1e300);
        const double panel =
            oscillation_panel_width(micro < 1e299 ? micro : 0.0, std::abs(k));
        std::vector<double> cuts = V.breakpoints();
        for (double c : W.breakpoints()) cuts.push_back(c);
        out.i_vw = detail::refine_panels(integrand, -R, R, cuts, panel, quad_tol);
    }
    const Cplx k_over_t_v = Cplx(0.0, 0.5) * wronskian(fpV, fmV).value;
    const Cplx k_over_t_w = Cplx(0.0, 0.5) * wronskian(fpW, fmW).value;
    out.delta_k_over_t = k_over_t_v - k_over_t_w;
    out.identity_residual = std::abs(out.delta_k_over_t - Cplx(0.0, 0.5) * out.i_vw);
    return out;
}

// t at the scaled wave number k = eps^2 kappa, guarded against the predicted
// scaled pole at kappa = i (integral of Lambda)/2.
inline Cplx scaled_transmission(const TwoScalePotential& P, double epsilon, Cplx kappa,
                                const SolverConfig& cfg = {}, double guard_radius = 1e-3) {
    const double mass = P.integral_lambda_eff();
    if (std::abs(kappa - Cplx(0.0, 0.5 * mass)) <= guard_radius)
        throw PoleProximityError("scaled_transmission: kappa inside the scaled-pole guard disc");
    return transmission(P, epsilon, epsilon * epsilon * kappa, cfg).t;
}

// Transmission coefficient of the attractive delta well of the given mass:
// t(kappa) = kappa / (kappa - i mass / 2).
inline Cplx dirac_transmission(Cplx kappa, double mass) {
    const Cplx pole(0.0, 0.5 * mass);
    if (std::abs(kappa - pole) <= 1e-12 * (1.0 + std::abs(kappa)))
        throw PoleProximityError("dirac_transmission: evaluation at the pole");
    return kappa / (kappa - pole);
}

struct GenericityReport {
    Cplx i_zero{0.0, 0.0};     // I(0)
    double abs_t_at_k0 = 0.0;  // |t(k0)|, k0 = 1e-3
    double threshold = 0.0;    // 1e-6 * (1 + sup|V|)
    bool generic = false;
};

// A potential is generic when I(0) = W[f+, f-](0) is bounded away from zero;
// then t(k) -> 0 as k -> 0.
inline GenericityReport genericity_indicator(const TwoScalePotential& P, double epsilon,
                                             const SolverConfig& cfg = {}) {
    GenericityReport rep;
    rep.i_zero = i_integral(P, epsilon, Cplx(0.0, 0.0), cfg).value;
    rep.threshold = 1e-6 * (1.0 + P.sup_abs(epsilon));
    rep.abs_t_at_k0 = std::abs(transmission(P, epsilon, Cplx(1e-3, 0.0), cfg).t);
    rep.generic = std::abs(rep.i_zero) > rep.threshold;
    return rep;
}

inline void write_transmission_csv_header(std::ostream& os) {
    os << "k_re,k_im,t_re,t_im,abs_t,r_re,r_im,abs_r,w_re,w_im\n";
}

inline void write_transmission_csv_row(std::ostream& os, const TransmissionResult& r) {
    const auto old_precision = os.precision(17);
    os << r.k.real() << ',' << r.k.imag() << ',' << r.t.real() << ',' << r.t.imag() << ','
       << std::abs(r.t) << ',';
    if (r.has_reflection)
        os << r.r_plus.real() << ',' << r.r_plus.imag() << ',' << std::abs(r.r_plus) << ',';
    else
        os << "nan,nan,nan,";
    os << r.w.real() << ',' << r.w.imag() << '\n';
    os.precision(old_precision);
}

}  // namespace scat1d
