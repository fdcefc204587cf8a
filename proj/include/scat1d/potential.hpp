#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "scat1d/errors.hpp"
#include "scat1d/quadrature.hpp"

namespace scat1d {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// ---------------------------------------------------------------------------
// Envelope: a small closed set of smooth (or piecewise-constant) real
// amplitude profiles.  Keeping the set closed makes potentials value-typed,
// serializable, and cheap to evaluate in the ODE hot path.
// ---------------------------------------------------------------------------

enum class EnvelopeKind { zero, gaussian, bump, double_bump, sech2, box };

struct Envelope {
    EnvelopeKind kind = EnvelopeKind::zero;
    double a = 0.0;    // amplitude
    double x0 = 0.0;   // center
    double w = 1.0;    // half-width (bump, box) or std-deviation (gaussian)
    double rho = 1.0;  // rate (sech2)

    static Envelope zero() { return {}; }
    static Envelope gaussian(double amp, double sigma, double center = 0.0) {
        if (!(sigma > 0.0)) throw ConstructionError("gaussian envelope: sigma must be > 0");
        return {EnvelopeKind::gaussian, amp, center, sigma, 1.0};
    }
    // amp * exp(-u^2/(1-u^2)) with u = (x-center)/half_width, supported on |u| < 1.
    static Envelope bump(double amp, double center = 0.0, double half_width = 1.0) {
        if (!(half_width > 0.0)) throw ConstructionError("bump envelope: width must be > 0");
        return {EnvelopeKind::bump, amp, center, half_width, 1.0};
    }
    // Two half-width bumps centered at -1/2 and +1/2, supported on [-1, 1].
    static Envelope double_bump(double amp) {
        return {EnvelopeKind::double_bump, amp, 0.0, 1.0, 1.0};
    }
    static Envelope sech2(double amp, double rate, double center = 0.0) {
        if (!(rate > 0.0)) throw ConstructionError("sech2 envelope: rate must be > 0");
        return {EnvelopeKind::sech2, amp, center, 1.0, rate};
    }
    static Envelope box(double amp, double center, double half_width) {
        if (!(half_width > 0.0)) throw ConstructionError("box envelope: width must be > 0");
        return {EnvelopeKind::box, amp, center, half_width, 1.0};
    }

    double operator()(double x) const {
        switch (kind) {
            case EnvelopeKind::zero:
                return 0.0;
            case EnvelopeKind::gaussian: {
                const double u = (x - x0) / w;
                const double e = 0.5 * u * u;
                return e > 745.0 ? 0.0 : a * std::exp(-e);
            }
            case EnvelopeKind::bump: {
                const double u = (x - x0) / w;
                const double u2 = u * u;
                if (u2 >= 1.0) return 0.0;
                const double e = u2 / (1.0 - u2);
                return e > 745.0 ? 0.0 : a * std::exp(-e);
            }
            case EnvelopeKind::double_bump: {
                double v = 0.0;
                {
                    const double u = (x + 0.5) / 0.5;
                    const double u2 = u * u;
                    if (u2 < 1.0) {
                        const double e = u2 / (1.0 - u2);
                        if (e <= 745.0) v += std::exp(-e);
                    }
                }
                {
                    const double u = (x - 0.5) / 0.5;
                    const double u2 = u * u;
                    if (u2 < 1.0) {
                        const double e = u2 / (1.0 - u2);
                        if (e <= 745.0) v += std::exp(-e);
                    }
                }
                return a * v;
            }
            case EnvelopeKind::sech2: {
                const double u = rho * (x - x0);
                if (std::abs(u) > 370.0) return 0.0;
                const double c = std::cosh(u);
                return a / (c * c);
            }
            case EnvelopeKind::box:
                return std::abs(x - x0) <= w ? a : 0.0;
        }
        return 0.0;
    }

    // Radius R such that the envelope is exactly zero (compact kinds) or below
    // ~1e-14 * |a| (decaying kinds) outside [-R, R].
    double support_radius() const {
        switch (kind) {
            case EnvelopeKind::zero:
                return 0.0;
            case EnvelopeKind::gaussian:
                return std::abs(x0) + 8.1 * w;  // exp(-8.1^2/2) ~ 5e-15
            case EnvelopeKind::bump:
            case EnvelopeKind::box:
                return std::abs(x0) + w;
            case EnvelopeKind::double_bump:
                return 1.0;
            case EnvelopeKind::sech2:
                // |a| sech^2(rho r) <= 4|a| e^{-2 rho r} < 1e-14 |a|
                return std::abs(x0) + 16.8 / rho;
        }
        return 0.0;
    }

    // Locations where the profile is discontinuous (integration must not step
    // across them).
    void append_breakpoints(std::vector<double>& out) const {
        if (kind == EnvelopeKind::box) {
            out.push_back(x0 - w);
            out.push_back(x0 + w);
        }
    }

    bool is_zero() const { return kind == EnvelopeKind::zero || a == 0.0; }
};

// One oscillatory coefficient: q_j(x) = coeff * amp(x), entering the potential
// as q_j(x) e^{2 pi i lambda_j x / epsilon}.
struct PotentialMode {
    int label = 0;                          // j != 0
    double lambda = 0.0;                    // frequency lambda_j
    std::complex<double> coeff{1.0, 0.0};   // constant complex factor
    Envelope amp;                           // real amplitude profile

    std::complex<double> eval(double x) const { return coeff * amp(x); }
};

// ---------------------------------------------------------------------------
// TwoScalePotential: V_eps(x) = q_av(x) + sum_j q_j(x) e^{2 pi i lambda_j x/eps}.
//
// The background q_av is a weighted sum of envelopes, optionally plus a
// "derived well" term c * Lambda(x) where Lambda is the effective-well density
// of a stored mode set (used to represent q_av - eps^2 * Lambda as an ordinary
// unimodulated potential).
// ---------------------------------------------------------------------------

class TwoScalePotential {
  public:
    TwoScalePotential() = default;

    TwoScalePotential(std::vector<std::pair<double, Envelope>> background,
                      std::vector<PotentialMode> modes, double theta, double beta)
        : background_(std::move(background)),
          modes_(std::move(modes)),
          theta_(theta),
          beta_(beta) {
        if (!(beta_ > 0.0)) throw ConstructionError("potential: decay rate beta must be > 0");
        if (!(theta_ > 0.0)) throw ConstructionError("potential: separation theta must be > 0");
        validate_modes();
    }

    // -- structure ----------------------------------------------------------

    const std::vector<PotentialMode>& modes() const { return modes_; }
    bool has_microstructure() const { return !modes_.empty(); }
    double theta() const { return theta_; }
    double beta() const { return beta_; }

    double support_radius() const {
        double r = 0.0;
        for (const auto& [wgt, env] : background_)
            if (wgt != 0.0 && !env.is_zero()) r = std::max(r, env.support_radius());
        for (const auto& m : modes_)
            if (m.coeff != std::complex<double>(0.0) && !m.amp.is_zero())
                r = std::max(r, m.amp.support_radius());
        if (well_weight_ != 0.0)
            for (const auto& m : well_modes_) r = std::max(r, m.amp.support_radius());
        return r;
    }

    std::vector<double> breakpoints() const {
        std::vector<double> b;
        for (const auto& [wgt, env] : background_) {
            (void)wgt;
            env.append_breakpoints(b);
        }
        for (const auto& m : modes_) m.amp.append_breakpoints(b);
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        return b;
    }

    // -- evaluation ---------------------------------------------------------

    double q_av(double x) const {
        double v = 0.0;
        for (const auto& [wgt, env] : background_) v += wgt * env(x);
        if (well_weight_ != 0.0) v += well_weight_ * lambda_of(well_modes_, x);
        return v;
    }

    // q_j(x) for the i-th stored mode.
    std::complex<double> mode_value(std::size_t i, double x) const {
        return modes_.at(i).eval(x);
    }

    // Full potential at x for microstructure period epsilon.  The mode sum is
    // checked to be real up to roundoff (conjugate pairing) and finite.
    double eval_total(double epsilon, double x) const {
        double v = q_av(x);
        if (!modes_.empty()) {
            if (!(epsilon > 0.0))
                throw DomainError("eval_total: epsilon must be > 0 for microstructured potentials");
            std::complex<double> sum{0.0, 0.0};
            double scale = 0.0;
            const double y = kTwoPi * x / epsilon;
            for (const auto& m : modes_) {
                const std::complex<double> qj = m.eval(x);
                scale += std::abs(qj);
                sum += qj * std::polar(1.0, m.lambda * y);
            }
            if (std::abs(sum.imag()) > 1e-12 * (1.0 + scale))
                throw EvalError("eval_total: mode sum has a non-negligible imaginary part", x);
            v += sum.real();
        }
        if (!std::isfinite(v)) throw EvalError("eval_total: non-finite value", x);
        return v;
    }

    // Effective-well density Lambda(x) = (1/4pi^2) sum_j |q_j(x)|^2 / lambda_j^2.
    double lambda_eff(double x) const { return lambda_of(modes_, x); }

    // integral of Lambda over its (compact or effectively compact) support.
    double integral_lambda_eff(double abs_tol = 1e-10) const {
        if (modes_.empty()) return 0.0;
        double r = 0.0;
        for (const auto& m : modes_) r = std::max(r, m.amp.support_radius());
        if (r == 0.0) return 0.0;
        return adaptive_simpson([this](double x) { return lambda_eff(x); }, -r, r, abs_tol);
    }

    // The unimodulated effective potential q_av(x) - eps^2 * Lambda(x).
    TwoScalePotential effective_well(double epsilon) const {
        if (!(epsilon > 0.0)) throw DomainError("effective_well: epsilon must be > 0");
        TwoScalePotential out;
        out.background_ = background_;
        out.theta_ = theta_;
        out.beta_ = beta_;
        // fold an existing derived-well term into the new one only when the
        // mode sets match; potentials produced by factories never nest them.
        if (well_weight_ != 0.0)
            throw ConstructionError("effective_well: potential already carries a derived well");
        out.well_weight_ = -epsilon * epsilon;
        out.well_modes_ = modes_;
        return out;
    }

    // Crude upper estimate of sup_x |V_eps(x)| by dense sampling (plus the
    // worst-case mode sum, which bounds the unsampled oscillation phases).
    double sup_abs(double epsilon, int samples = 4096) const {
        const double r = std::max(support_radius(), 1.0);
        double best = 0.0;
        for (int i = 0; i <= samples; ++i) {
            const double x = -r + 2.0 * r * static_cast<double>(i) / samples;
            double v = std::abs(q_av(x));
            double osc = 0.0;
            for (const auto& m : modes_) osc += std::abs(m.eval(x));
            (void)epsilon;
            best = std::max(best, v + osc);
        }
        return best;
    }

  private:
    static double lambda_of(const std::vector<PotentialMode>& ms, double x) {
        double s = 0.0;
        for (const auto& m : ms) {
            const double q = std::abs(m.eval(x));
            s += q * q / (m.lambda * m.lambda);
        }
        return s / (4.0 * kPi * kPi);
    }

    void validate_modes() const {
        for (std::size_t i = 0; i < modes_.size(); ++i) {
            const auto& m = modes_[i];
            if (m.label == 0) throw ConstructionError("mode label 0 is reserved for q_av");
            if (m.lambda == 0.0) throw ConstructionError("mode frequency must be nonzero");
            for (std::size_t l = i + 1; l < modes_.size(); ++l)
                if (modes_[l].label == m.label)
                    throw ConstructionError("duplicate mode label");
        }
        // If a mirror label is present it must be the exact conjugate partner.
        for (const auto& m : modes_) {
            for (const auto& p : modes_) {
                if (p.label != -m.label) continue;
                const bool freq_ok = p.lambda == -m.lambda;
                const bool coeff_ok = p.coeff == std::conj(m.coeff);
                const bool amp_ok = p.amp.kind == m.amp.kind && p.amp.a == m.amp.a &&
                                    p.amp.x0 == m.amp.x0 && p.amp.w == m.amp.w &&
                                    p.amp.rho == m.amp.rho;
                if (!freq_ok || !coeff_ok || !amp_ok)
                    throw ConstructionError("mismatched conjugate mode pair");
            }
        }
    }

    std::vector<std::pair<double, Envelope>> background_;
    std::vector<PotentialMode> modes_;
    double theta_ = 1.0;
    double beta_ = 1.0;
    // derived-well term: well_weight_ * Lambda_{well_modes_}(x) added to q_av.
    double well_weight_ = 0.0;
    std::vector<PotentialMode> well_modes_;
};

// ---------------------------------------------------------------------------
// Built-in families.
// ---------------------------------------------------------------------------

// V == 0.
inline TwoScalePotential make_zero() {
    return TwoScalePotential({}, {}, 1.0, 1.0);
}

// amplitude * 1_{[-1,1]}(x) e^{-x^2/(1-x^2)} cos(2 pi x / epsilon):
// mean-zero microstructure under a smooth compact envelope.
inline TwoScalePotential make_bump_cosine(double amplitude = 10.0) {
    const Envelope env = Envelope::bump(1.0, 0.0, 1.0);
    std::vector<PotentialMode> modes = {
        {+1, +1.0, {0.5 * amplitude, 0.0}, env},
        {-1, -1.0, {0.5 * amplitude, 0.0}, env},
    };
    return TwoScalePotential({}, std::move(modes), 1.0, 5.0);
}

// Same cosine microstructure under two half-width bumps centered at +-1/2.
inline TwoScalePotential make_double_bump_cosine(double amplitude = 10.0) {
    const Envelope env = Envelope::double_bump(1.0);
    std::vector<PotentialMode> modes = {
        {+1, +1.0, {0.5 * amplitude, 0.0}, env},
        {-1, -1.0, {0.5 * amplitude, 0.0}, env},
    };
    return TwoScalePotential({}, std::move(modes), 1.0, 5.0);
}

// Two-frequency variant: amp1 cos(2 pi x/eps) + amp2 cos(2 sqrt(2) pi x/eps)
// under the same bump envelope (incommensurate frequencies).
inline TwoScalePotential make_bump_two_cosines(double amp1, double amp2) {
    const Envelope env = Envelope::bump(1.0, 0.0, 1.0);
    const double r2 = std::sqrt(2.0);
    std::vector<PotentialMode> modes = {
        {+1, +1.0, {0.5 * amp1, 0.0}, env},
        {-1, -1.0, {0.5 * amp1, 0.0}, env},
        {+2, +r2, {0.5 * amp2, 0.0}, env},
        {-2, -r2, {0.5 * amp2, 0.0}, env},
    };
    // frequencies {1, sqrt2} separated by sqrt2 - 1 ~ 0.414
    return TwoScalePotential({}, std::move(modes), 0.41, 5.0);
}

// Reflectionless well -2 rho^2 sech^2(rho (x - x0)).
inline TwoScalePotential make_soliton(double rho = 1.0, double x0 = 0.0) {
    std::vector<std::pair<double, Envelope>> bg = {
        {1.0, Envelope::sech2(-2.0 * rho * rho, rho, x0)}};
    return TwoScalePotential(std::move(bg), {}, 1.0, 2.0 * rho);
}

// Soliton background plus the bump-cosine microstructure centered on it.
inline TwoScalePotential make_soliton_with_microstructure(double rho = 1.0, double x0 = 0.0,
                                                          double amplitude = 10.0) {
    const Envelope env = Envelope::bump(1.0, x0, 1.0);
    std::vector<std::pair<double, Envelope>> bg = {
        {1.0, Envelope::sech2(-2.0 * rho * rho, rho, x0)}};
    std::vector<PotentialMode> modes = {
        {+1, +1.0, {0.5 * amplitude, 0.0}, env},
        {-1, -1.0, {0.5 * amplitude, 0.0}, env},
    };
    return TwoScalePotential(std::move(bg), std::move(modes), 1.0, 2.0 * rho);
}

// -depth on [-half_width, half_width] (depth > 0 gives a well).
inline TwoScalePotential make_square_well(double depth, double half_width) {
    std::vector<std::pair<double, Envelope>> bg = {
        {1.0, Envelope::box(-depth, 0.0, half_width)}};
    return TwoScalePotential(std::move(bg), {}, 1.0, 5.0);
}

// ---------------------------------------------------------------------------
// Admissibility report: weighted norms and structural flags.
// ---------------------------------------------------------------------------

struct HypothesisReport {
    double exp_norm = 0.0;   // |q_av|_{W^{1,inf}_beta} + sum_j |q_j|_{W^{3,inf}_beta}
    double alg_norm = 0.0;   // |q_av|_{W^{1,1}_2}    + sum_j |q_j|_{W^{3,1}_3}
    bool theta_ok = false;   // frequencies separated and bounded away from 0
    bool reality_ok = false; // every mode has its exact conjugate partner
};

namespace detail {

// Central finite-difference derivative of order `ord` (0..3) at x, step h.
template <class F>
double fd_derivative(F&& f, double x, int ord, double h) {
    switch (ord) {
        case 0:
            return f(x);
        case 1:
            return (f(x + h) - f(x - h)) / (2.0 * h);
        case 2:
            return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        default:
            return (f(x + 2 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2 * h)) /
                   (2.0 * h * h * h);
    }
}

// sup over a sample grid of e^{beta |x|} |d^l f| summed over l = 0..max_ord,
// and the weighted-L1 counterpart with weight (1+|x|)^s.
template <class F>
std::pair<double, double> weighted_norms(F&& f, double radius, double beta, int max_ord,
                                         double poly_power, int samples = 2000) {
    const double h = 1e-4;
    const double r = radius + 0.5;
    double sup = 0.0, l1 = 0.0;
    const double dx = 2.0 * r / samples;
    for (int i = 0; i <= samples; ++i) {
        const double x = -r + dx * i;
        double tot = 0.0;
        for (int l = 0; l <= max_ord; ++l) tot += std::abs(fd_derivative(f, x, l, h));
        sup = std::max(sup, std::exp(beta * std::abs(x)) * tot);
        const double trap = (i == 0 || i == samples) ? 0.5 : 1.0;
        l1 += trap * std::pow(1.0 + std::abs(x), poly_power) * tot * dx;
    }
    return {sup, l1};
}

}  // namespace detail

inline HypothesisReport check_hypotheses(const TwoScalePotential& P) {
    HypothesisReport rep;
    const double beta = P.beta();
    const double r = std::max(P.support_radius(), 1.0);

    auto qav = [&P](double x) { return P.q_av(x); };
    auto [sup_av, l1_av] = detail::weighted_norms(qav, r, beta, 1, 2.0);
    rep.exp_norm = sup_av;
    rep.alg_norm = l1_av;
    for (std::size_t i = 0; i < P.modes().size(); ++i) {
        auto qj = [&P, i](double x) { return std::abs(P.mode_value(i, x)); };
        auto [sup_j, l1_j] = detail::weighted_norms(qj, r, beta, 3, 3.0);
        rep.exp_norm += sup_j;
        rep.alg_norm += l1_j;
    }

    const auto& ms = P.modes();
    rep.theta_ok = true;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        if (std::abs(ms[i].lambda) < P.theta()) rep.theta_ok = false;
        for (std::size_t l = i + 1; l < ms.size(); ++l)
            if (std::abs(ms[i].lambda - ms[l].lambda) < P.theta()) rep.theta_ok = false;
    }

    rep.reality_ok = true;
    for (const auto& m : ms) {
        bool mirrored = false;
        for (const auto& p : ms)
            if (p.label == -m.label && p.lambda == -m.lambda && p.coeff == std::conj(m.coeff))
                mirrored = true;
        if (!mirrored) rep.reality_ok = false;
    }
    return rep;
}

}  // namespace scat1d
