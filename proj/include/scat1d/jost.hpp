#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "scat1d/errors.hpp"
#include "scat1d/ode.hpp"
#include "scat1d/potential.hpp"

namespace scat1d {

// Which asymptotic side the solution is normalized on:
//   plus : f_+(x;k) ~ e^{+ikx} as x -> +inf
//   minus: f_-(x;k) ~ e^{-ikx} as x -> -inf
enum class Side { plus, minus };

// Wave number for a one-sided Jost solve.  Each modulated solution converges
// for Im k > -beta/2 (beta = coefficient decay rate); the symmetric strip
// |Im k| < beta/2 is only needed when solutions at both +k and -k enter
// (reflection coefficients), which callers enforce separately.
struct WaveNumber {
    Cplx value{0.0, 0.0};
    double strip_bound = 0.0;

    static WaveNumber make(Cplx k, double beta) {
        const double bound = 0.5 * beta;
        if (!(k.imag() > -bound))
            throw DomainError("wave number below the analyticity line Im k = -beta/2");
        return {k, bound};
    }
};

struct SolverConfig {
    double L = 0.0;            // truncation radius; 0 = auto from support/decay
    double h_max = 0.0;        // step cap; 0 = auto (eps/20 or smooth default)
    double rtol = 1e-10;
    double atol = 1e-12;
    double epsilon_hint = -1;  // microstructure period; -1 = auto, 0 = smooth
};

// One Jost solution in modulated form m(x) = f(x) e^{-sigma i k x} (sigma =
// +1/-1 for side plus/minus), solved from the asymptotic side inward with
// m(sigma L) = 1, m'(sigma L) = 0.  Stores (m, m') on the accepted step grid
// (ascending in x) plus the node derivatives for cubic Hermite interpolation.
class JostSolution {
  public:
    JostSolution(Side side, Cplx k, double L, double rtol, OdeTrace tr)
        : side_(side), k_(k), L_(L), rtol_(rtol), tr_(std::move(tr)) {
        if (tr_.x.size() >= 2 && tr_.x.front() > tr_.x.back()) {
            std::reverse(tr_.x.begin(), tr_.x.end());
            std::reverse(tr_.y.begin(), tr_.y.end());
            std::reverse(tr_.dy.begin(), tr_.dy.end());
        }
    }

    Side side() const { return side_; }
    Cplx k() const { return k_; }
    double L() const { return L_; }
    double rtol() const { return rtol_; }
    std::size_t nodes() const { return tr_.x.size(); }
    long steps_accepted() const { return tr_.accepted; }
    long steps_rejected() const { return tr_.rejected; }

    // (m, m') at x.  Beyond the asymptotic boundary the solution is exactly
    // its boundary value; beyond the far boundary evaluation is undefined.
    std::pair<Cplx, Cplx> eval_m(double x) const {
        const double sigma = (side_ == Side::plus) ? 1.0 : -1.0;
        if (sigma * x >= L_) return {Cplx(1.0, 0.0), Cplx(0.0, 0.0)};
        if (sigma * x < -L_)
            throw DomainError("JostSolution: evaluation beyond the far end of the solved interval");
        // locate interval
        const auto& xs = tr_.x;
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        std::size_t i = (it == xs.begin()) ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
        if (i + 1 >= xs.size()) i = xs.size() - 2;
        const double xa = xs[i], xb = xs[i + 1];
        const double h = xb - xa;
        if (h <= 0.0) return {tr_.y[i][0], tr_.y[i][1]};
        const double s = (x - xa) / h;
        const double s2 = s * s;
        const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        const double h10 = s * (1.0 - s) * (1.0 - s);
        const double h01 = s2 * (3.0 - 2.0 * s);
        const double h11 = s2 * (s - 1.0);
        const Cplx m = h00 * tr_.y[i][0] + h10 * h * tr_.dy[i][0] + h01 * tr_.y[i + 1][0] +
                       h11 * h * tr_.dy[i + 1][0];
        const Cplx mp = h00 * tr_.y[i][1] + h10 * h * tr_.dy[i][1] + h01 * tr_.y[i + 1][1] +
                        h11 * h * tr_.dy[i + 1][1];
        return {m, mp};
    }

    // (f, f') at x, where f = m e^{sigma i k x}.
    std::pair<Cplx, Cplx> eval_f(double x) const {
        const double sigma = (side_ == Side::plus) ? 1.0 : -1.0;
        const auto [m, mp] = eval_m(x);
        const Cplx ph = std::exp(Cplx(0.0, 1.0) * (sigma * k_) * x);
        const Cplx f = m * ph;
        const Cplx fp = (mp + Cplx(0.0, 1.0) * (sigma * k_) * m) * ph;
        return {f, fp};
    }

  private:
    Side side_;
    Cplx k_;
    double L_;
    double rtol_;
    OdeTrace tr_;
};

inline double auto_truncation_radius(const TwoScalePotential& P, double atol) {
    return P.support_radius() + std::max(5.0, std::log(1.0 / atol) / P.beta());
}

// Solve for the Jost solution of -f'' + V f = k^2 f on the given side.
// The modulated unknown satisfies m'' = V m - sigma 2ik m', integrated from
// sigma*L toward -sigma*L so that boundary data sit on the asymptotic side.
inline JostSolution solve_jost(const TwoScalePotential& P, double epsilon, Cplx k, Side side,
                               const SolverConfig& cfg = {}) {
    const WaveNumber wn = WaveNumber::make(k, P.beta());
    (void)wn;
    const double atol = cfg.atol > 0.0 ? cfg.atol : 1e-12;
    const double rtol = cfg.rtol > 0.0 ? cfg.rtol : 1e-10;
    double L = cfg.L > 0.0 ? cfg.L : auto_truncation_radius(P, atol);
    if (P.support_radius() > 0.0 && !(L > P.support_radius()))
        throw DomainError("solve_jost: truncation radius L lies inside the potential support");

    double eps_hint = cfg.epsilon_hint;
    if (eps_hint < 0.0) eps_hint = P.has_microstructure() ? epsilon : 0.0;
    // Step cap: resolve the fast scale when present, otherwise a fraction of
    // the plane-wave period; the error controller sets the actual step below it.
    double h_auto = (eps_hint > 0.0) ? eps_hint / 20.0
                                     : std::min(0.1, 0.5 / (1.0 + std::abs(k)));
    const double h_max = (cfg.h_max > 0.0) ? std::min(cfg.h_max, h_auto) : h_auto;

    const double sigma = (side == Side::plus) ? 1.0 : -1.0;
    const Cplx two_ik = Cplx(0.0, 2.0) * k;
    auto rhs = [&P, epsilon, sigma, two_ik](double x, const OdeState& y, OdeState& d) {
        const double v = P.eval_total(epsilon, x);
        d[0] = y[1];
        d[1] = v * y[0] - sigma * two_ik * y[1];
    };

    OdeTrace tr = integrate_dp45(rhs, sigma * L, -sigma * L, OdeState{Cplx(1.0), Cplx(0.0)},
                                 rtol, atol, h_max, P.breakpoints());
    return JostSolution(side, k, L, rtol, std::move(tr));
}

struct WronskianEstimate {
    Cplx value{0.0, 0.0};
    double drift = 0.0;  // max deviation from the mean over the sample points
};

// Wronskian W[f_a, f_b] = f_a f_b' - f_b f_a', estimated as the mean over 16
// interior sample points; constancy in x is a solver-quality diagnostic.
inline WronskianEstimate wronskian(const JostSolution& A, const JostSolution& B) {
    const double L = std::min(A.L(), B.L());
    std::array<Cplx, 16> w;
    double term_scale = 1.0;
    for (int j = 0; j < 16; ++j) {
        const double x = -L + 2.0 * L * (j + 1) / 17.0;
        const auto [fa, fap] = A.eval_f(x);
        const auto [fb, fbp] = B.eval_f(x);
        w[j] = fa * fbp - fb * fap;
        term_scale = std::max(term_scale, std::abs(fa * fbp) + std::abs(fb * fap));
    }
    Cplx mean{0.0, 0.0};
    for (const Cplx& v : w) mean += v;
    mean /= 16.0;
    double drift = 0.0;
    for (const Cplx& v : w) drift = std::max(drift, std::abs(v - mean));
    const double rtol = std::max(A.rtol(), B.rtol());
    const double kabs = std::max(std::abs(A.k()), std::abs(B.k()));
    // Error budget: the step controller admits up to ~rtol of local error per
    // accepted step, so the end-to-end drift grows with the step count and
    // with the size of the products being differenced, not with |W| itself
    // (which may nearly cancel near a non-generic point).
    const double nsteps =
        static_cast<double>(std::max({A.steps_accepted(), B.steps_accepted(), 100L}));
    const double bound = 4.0 * rtol * (1.0 + kabs) * nsteps * term_scale;
    if (drift > bound)
        throw ConditioningError("wronskian: drift across sample points exceeds tolerance", drift);
    WronskianEstimate est;
    est.value = mean;
    est.drift = drift;
    return est;
}

}  // namespace scat1d
