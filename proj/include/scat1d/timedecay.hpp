#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "scat1d/errors.hpp"
#include "scat1d/fit.hpp"
#include "scat1d/jost.hpp"
#include "scat1d/potential.hpp"
#include "scat1d/quadrature.hpp"
#include "scat1d/tridiag.hpp"

namespace scat1d {

struct UniformGrid {
    double x0 = 0.0;  // leftmost node
    double h = 0.0;
    std::size_t n = 0;

    double x(std::size_t i) const { return x0 + h * static_cast<double>(i); }
    double half_width() const { return 0.5 * h * static_cast<double>(n - 1); }
};

inline UniformGrid make_symmetric_grid(double L, double h) {
    if (!(L > 0.0) || !(h > 0.0) || h >= L)
        throw ConstructionError("make_symmetric_grid: need 0 < h < L");
    const std::size_t half = static_cast<std::size_t>(std::ceil(L / h));
    UniformGrid g;
    g.h = h;
    g.n = 2 * half + 1;
    g.x0 = -h * static_cast<double>(half);
    return g;
}

struct InitialState {
    UniformGrid grid;
    std::vector<Cplx> psi;
    double weight_norm_3 = 0.0;  // integral of (1 + |y|^3) |psi(y)| dy

    double l2_norm() const {
        double s = 0.0;
        for (const Cplx& v : psi) s += std::norm(v);
        return std::sqrt(grid.h * s);
    }
};

inline double norm_of(const std::vector<Cplx>& psi, double h) {
    double s = 0.0;
    for (const Cplx& v : psi) s += std::norm(v);
    return std::sqrt(h * s);
}

inline double weighted_l1_norm3(const UniformGrid& g, const std::vector<Cplx>& psi) {
    double s = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double ax = std::abs(g.x(i));
        const double w = 1.0 + ax * ax * ax;
        const double v = w * std::abs(psi[i]);
        s += (i == 0 || i + 1 == psi.size()) ? 0.5 * v : v;
    }
    return g.h * s;
}

// Unit-mass Gaussian packet (pi sigma^2)^{-1/4} exp(-(x-center)^2 / (2 sigma^2)).
inline InitialState gaussian_state(double L, double h, double sigma = 1.0, double center = 0.0) {
    InitialState st;
    st.grid = make_symmetric_grid(L, h);
    st.psi.resize(st.grid.n);
    const double norm = std::pow(kPi * sigma * sigma, -0.25);
    for (std::size_t i = 0; i < st.grid.n; ++i) {
        const double u = (st.grid.x(i) - center) / sigma;
        st.psi[i] = Cplx(norm * std::exp(-0.5 * u * u), 0.0);
    }
    st.weight_norm_3 = weighted_l1_norm3(st.grid, st.psi);
    return st;
}

struct DiscreteBoundState {
    double energy = 0.0;
    std::vector<double> u;  // on the full grid, endpoints zero, h*sum(u^2) = 1
};

// Bound states of -u'' + V u on the state grid (Dirichlet ends), filtered by
// the same grid-error criterion as the matrix oracle.
inline std::vector<DiscreteBoundState> bound_states_on_grid(const TwoScalePotential& P,
                                                            double epsilon,
                                                            const UniformGrid& grid) {
    const std::size_t n_int = grid.n - 2;
    SymTridiag T;
    T.d.resize(n_int);
    T.e.assign(n_int - 1, -1.0 / (grid.h * grid.h));
    for (std::size_t i = 0; i < n_int; ++i)
        T.d[i] = 2.0 / (grid.h * grid.h) + P.eval_total(epsilon, grid.x(i + 1));
    const std::vector<double> evs = tridiag_eigenvalues_below(T, 0.0, 1e-14);
    std::vector<DiscreteBoundState> out;
    for (double lambda : evs) {
        std::vector<double> u_int = inverse_iteration(T, lambda);
        double quartic = 0.0;
        const std::size_t m = u_int.size();
        auto at = [&u_int, m](std::ptrdiff_t i) {
            return (i < 0 || i >= static_cast<std::ptrdiff_t>(m))
                       ? 0.0
                       : u_int[static_cast<std::size_t>(i)];
        };
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i)
            quartic += u_int[static_cast<std::size_t>(i)] *
                       (at(i - 2) - 4.0 * at(i - 1) + 6.0 * at(i) - 4.0 * at(i + 1) + at(i + 2));
        quartic /= std::pow(grid.h, 4);
        const double grid_error = (grid.h * grid.h / 12.0) * std::abs(quartic);
        if (!(lambda < -10.0 * grid_error)) continue;
        DiscreteBoundState bs;
        bs.energy = lambda;
        bs.u.assign(grid.n, 0.0);
        const double scale = 1.0 / std::sqrt(grid.h);  // l2 -> L2 normalization
        for (std::size_t i = 0; i < m; ++i) bs.u[i + 1] = u_int[i] * scale;
        out.push_back(std::move(bs));
    }
    return out;
}

// Remove the bound-state components: psi_c = psi - sum <u_j, psi> u_j.
inline InitialState project_continuum(const InitialState& state,
                                      const std::vector<DiscreteBoundState>& bound_states) {
    InitialState out = state;
    const double h = state.grid.h;
    for (const DiscreteBoundState& bs : bound_states) {
        if (bs.u.size() != state.psi.size())
            throw PreconditionError("project_continuum: bound state on a different grid");
        double nrm = 0.0;
        for (double v : bs.u) nrm += v * v;
        nrm *= h;
        if (std::abs(nrm - 1.0) > 1e-8)
            throw PreconditionError("project_continuum: bound state is not L2-normalized");
    }
    for (const DiscreteBoundState& bs : bound_states) {
        Cplx overlap(0.0, 0.0);
        for (std::size_t i = 0; i < out.psi.size(); ++i) overlap += bs.u[i] * out.psi[i];
        overlap *= h;
        for (std::size_t i = 0; i < out.psi.size(); ++i) out.psi[i] -= overlap * bs.u[i];
    }
    for (const DiscreteBoundState& bs : bound_states) {
        Cplx residual(0.0, 0.0);
        for (std::size_t i = 0; i < out.psi.size(); ++i) residual += bs.u[i] * out.psi[i];
        residual *= h;
        if (std::abs(residual) > 1e-10)
            throw ConditioningError("project_continuum: residual overlap above tolerance",
                                    std::abs(residual));
    }
    out.weight_norm_3 = weighted_l1_norm3(out.grid, out.psi);
    return out;
}

struct DecayMetricsRow {
    double t = 0.0;
    double weighted_sup_p1 = 0.0;  // sup (1+|x|)^-1 |psi|
    double weighted_sup_p2 = 0.0;
    double weighted_sup_p3 = 0.0;
    double l2_norm = 0.0;
};

inline DecayMetricsRow field_metrics(const UniformGrid& g, const std::vector<Cplx>& psi,
                                     double t) {
    DecayMetricsRow row;
    row.t = t;
    double s2 = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double a = std::abs(psi[i]);
        const double w1 = 1.0 / (1.0 + std::abs(g.x(i)));
        row.weighted_sup_p1 = std::max(row.weighted_sup_p1, a * w1);
        row.weighted_sup_p2 = std::max(row.weighted_sup_p2, a * w1 * w1);
        row.weighted_sup_p3 = std::max(row.weighted_sup_p3, a * w1 * w1 * w1);
        s2 += a * a;
    }
    row.l2_norm = std::sqrt(g.h * s2);
    return row;
}

enum class EvolveMethod { crank_nicolson, distorted_ft };

inline const char* method_label(EvolveMethod m) {
    return m == EvolveMethod::crank_nicolson ? "crank_nicolson" : "distorted_ft";
}

struct DecayField {
    EvolveMethod method = EvolveMethod::crank_nicolson;
    UniformGrid grid;  // grid on which snapshots live
    std::vector<DecayMetricsRow> metrics;
    std::vector<double> snapshot_times;
    std::vector<std::vector<Cplx>> snapshots;
    // diagnostic only: largest |psi| seen in the outer 10% of the domain at
    // any output time (legitimate ballistic outflow registers here too)
    double outer_band_max = 0.0;
};

inline const std::vector<DecayMetricsRow>& decay_metrics(const DecayField& field) {
    if (field.metrics.empty()) throw DomainError("decay_metrics: field holds no samples");
    return field.metrics;
}

inline void write_decay_csv(std::ostream& os, const DecayField& field) {
    const auto old_precision = os.precision(17);
    os << "t,weighted_sup_p1,weighted_sup_p2,weighted_sup_p3,l2_norm,method\n";
    for (const DecayMetricsRow& r : field.metrics)
        os << r.t << ',' << r.weighted_sup_p1 << ',' << r.weighted_sup_p2 << ','
           << r.weighted_sup_p3 << ',' << r.l2_norm << ',' << method_label(field.method) << '\n';
    os.precision(old_precision);
}

struct CnConfig {
    double dt = 0.05;
    std::vector<double> snapshot_times;
    double mass_drift_per_step = 1e-10;  // relative to the initial norm
    double reflection_tol = 1e-6;        // spectral round-trip contamination bound
    double tail_k_max = 40.0;            // extent of the reflection monitor's spectral table
    double tail_dk = 0.05;
};

namespace detail {

// Suffix-max spectral amplitude table of the initial state: tail_amp(k) is an
// upper bound for |psi_hat| at wave numbers >= k.  Used to bound how much
// amplitude can have bounced off the far walls and returned by a given time.
class SpectralTail {
  public:
    SpectralTail(const UniformGrid& g, const std::vector<Cplx>& psi, double k_max, double dk)
        : dk_(dk) {
        const std::size_t m = static_cast<std::size_t>(std::ceil(k_max / dk)) + 1;
        // Accumulate all wave numbers in one pass per node via the phase
        // recurrence e^{-i(k+dk)x} = e^{-ikx} e^{-i dk x}; the accumulator
        // block stays cache-resident, so million-node grids remain cheap.
        std::vector<Cplx> acc(m, Cplx(0.0, 0.0));
        for (std::size_t i = 0; i < psi.size(); ++i) {
            const double x = g.x(i);
            const Cplx step(std::cos(dk * x), -std::sin(dk * x));
            Cplx z(1.0, 0.0);
            for (std::size_t j = 0; j < m; ++j) {
                acc[j] += psi[i] * z;
                z *= step;
            }
        }
        amp_.resize(m);
        for (std::size_t j = 0; j < m; ++j) amp_[j] = std::abs(acc[j]) * g.h;
        for (std::size_t j = m - 1; j-- > 0;) amp_[j] = std::max(amp_[j], amp_[j + 1]);
    }

    double tail_amp(double k) const {
        if (!(k >= 0.0)) return amp_.empty() ? 0.0 : amp_[0];
        const std::size_t j = static_cast<std::size_t>(std::floor(k / dk_));
        if (j >= amp_.size()) return 0.0;
        return amp_[j];
    }

    // Smallest tabulated wave number whose suffix amplitude fits the budget;
    // one bin past the table if none does.
    double quiet_point(double budget) const {
        for (std::size_t j = 0; j < amp_.size(); ++j)
            if (amp_[j] <= budget) return dk_ * static_cast<double>(j);
        return dk_ * static_cast<double>(amp_.size());
    }

  private:
    double dk_;
    std::vector<double> amp_;
};

}  // namespace detail

// Unitary Crank-Nicolson propagation of i psi_t = (-d2/dx2 + V) psi on the
// state's grid with Dirichlet ends.  No absorbing layer: the caller supplies a
// domain large enough that round-trip wall reflections stay irrelevant, and a
// spectral monitor enforces that.
inline DecayField evolve_crank_nicolson(const TwoScalePotential& P, double epsilon,
                                        const InitialState& state,
                                        const std::vector<double>& times,
                                        const CnConfig& cfg = {}) {
    if (times.empty()) throw DomainError("evolve_crank_nicolson: no output times");
    for (std::size_t i = 0; i < times.size(); ++i)
        if (times[i] < 0.0 || (i > 0 && times[i] <= times[i - 1]))
            throw DomainError("evolve_crank_nicolson: times must be ascending and nonnegative");
    const double dt = cfg.dt;
    if (!(dt > 0.0)) throw DomainError("evolve_crank_nicolson: dt must be positive");

    const UniformGrid& g = state.grid;
    const std::size_t n = g.n;
    if (n < 3) throw DomainError("evolve_crank_nicolson: grid needs interior points");
    const double h = g.h;
    const double inv_h2 = 1.0 / (h * h);

    // Interior operator H: diag 2/h^2 + V, off-diagonal -1/h^2.  Only the
    // n - 2 interior values are unknowns; the walls stay pinned at zero, so
    // both Cayley factors share the same Hermitian matrix and every step is
    // exactly norm-preserving.  Wall reflections then conserve mass and are
    // the spectral monitor's job; the drift monitor below only watches
    // round-off in the linear solves.
    const std::size_t m = n - 2;
    std::vector<double> vdiag(m);
    for (std::size_t i = 0; i < m; ++i) vdiag[i] = 2.0 * inv_h2 + P.eval_total(epsilon, g.x(i + 1));

    const Cplx half_idt(0.0, 0.5 * dt);
    std::vector<Cplx> a_sub(m - 1, half_idt * (-inv_h2));
    std::vector<Cplx> a_sup(m - 1, half_idt * (-inv_h2));
    std::vector<Cplx> a_diag(m);
    for (std::size_t i = 0; i < m; ++i) a_diag[i] = 1.0 + half_idt * vdiag[i];
    const ComplexTridiagThomas lhs(std::move(a_sub), std::move(a_diag), std::move(a_sup));

    std::vector<Cplx> psi = state.psi;
    psi.front() = Cplx(0.0, 0.0);  // Dirichlet walls
    psi.back() = Cplx(0.0, 0.0);

    const double norm0 = state.l2_norm();
    if (!(norm0 > 0.0)) throw PreconditionError("evolve_crank_nicolson: zero initial state");

    const detail::SpectralTail tail(g, psi, cfg.tail_k_max, cfg.tail_dk);
    const double L_wall = g.half_width();

    DecayField out;
    out.method = EvolveMethod::crank_nicolson;
    out.grid = g;

    std::vector<long> target_steps(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) target_steps[i] = std::lround(times[i] / dt);
    std::vector<long> snap_steps(cfg.snapshot_times.size());
    for (std::size_t i = 0; i < cfg.snapshot_times.size(); ++i)
        snap_steps[i] = std::lround(cfg.snapshot_times[i] / dt);

    std::vector<Cplx> rhs(m);
    double prev_norm = norm_of(psi, h);
    std::size_t next_out = 0, next_snap = 0;
    const long last_step = std::max(target_steps.empty() ? 0L : target_steps.back(),
                                    snap_steps.empty() ? 0L : snap_steps.back());
    for (long step = 0; step <= last_step; ++step) {
        const double t_now = dt * static_cast<double>(step);
        while (next_out < target_steps.size() && target_steps[next_out] == step) {
            if (t_now > 0.0 && tail.tail_amp(L_wall / t_now) > cfg.reflection_tol)
                throw DomainError(
                    "evolve_crank_nicolson: domain too small, wall reflections can reach the "
                    "observation window at t = " +
                    std::to_string(t_now));
            out.metrics.push_back(field_metrics(g, psi, t_now));
            for (std::size_t i = 0; i < n; ++i)
                if (std::abs(g.x(i)) >= 0.9 * L_wall)
                    out.outer_band_max = std::max(out.outer_band_max, std::abs(psi[i]));
            ++next_out;
        }
        while (next_snap < snap_steps.size() && snap_steps[next_snap] == step) {
            out.snapshot_times.push_back(t_now);
            out.snapshots.push_back(psi);
            ++next_snap;
        }
        if (step == last_step) break;
        // rhs = (I - i dt/2 H) psi on the interior; the wall terms at i = 0
        // and i = m - 1 pick up psi[0] = psi[n-1] = 0 and vanish on their own.
        for (std::size_t i = 0; i < m; ++i) {
            Cplx acc = (1.0 - half_idt * vdiag[i]) * psi[i + 1];
            acc += half_idt * inv_h2 * psi[i];
            acc += half_idt * inv_h2 * psi[i + 2];
            rhs[i] = acc;
        }
        lhs.solve_inplace(rhs);
        for (std::size_t i = 0; i < m; ++i) psi[i + 1] = rhs[i];
        const double nrm = norm_of(psi, h);
        if (std::abs(nrm - prev_norm) > cfg.mass_drift_per_step * norm0)
            throw ConditioningError("evolve_crank_nicolson: mass drift above bound per step",
                                    std::abs(nrm - prev_norm));
        prev_norm = nrm;
    }
    return out;
}

struct DistortedConfig {
    double k_max = 0.0;       // 0 = auto: min(2 (1 + sup|V|), spectral cutoff)
    double x_eval_max = 15.0; // evaluation window for the field
    double eval_dx = 0.05;
    double refine_tol = 1e-5; // metric agreement between panel refinements
    bool refine_check = true;
    SolverConfig solver;
};

namespace detail {

struct DistortedNodes {
    std::vector<double> k;
    std::vector<double> weight;
};

// Gauss panels over (0, k_max] with stationary-phase refinement near k = 0
// and oscillation-limited widths elsewhere.
inline DistortedNodes distorted_nodes(double k_max, double t_eff, double halving) {
    DistortedNodes nd;
    const double k_sp = std::sqrt(kPi / (8.0 * t_eff));
    double a = 0.0;
    while (a < k_max) {
        const double w = std::min(0.2, 4.5 / (t_eff * std::max(a, k_sp))) * halving;
        const double b = std::min(a + w, k_max);
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        for (std::size_t j = 0; j < 8; ++j) {
            const double dx = half * GaussLegendre16::abscissa[j];
            const double wj = half * GaussLegendre16::weight[j];
            nd.k.push_back(mid - dx);
            nd.weight.push_back(wj);
            nd.k.push_back(mid + dx);
            nd.weight.push_back(wj);
        }
        a = b;
    }
    return nd;
}

}  // namespace detail

// Spectral-representation evolution: psi_c(t, x) = (1/2pi) * integral over
// k > 0 of exp(-i k^2 t) |t(k)|^2 [f+(x;k) c+(k) + f-(x;k) c-(k)] dk, with
// c+-(k) the distorted Fourier coefficients of the initial state.  Produces
// the continuum part directly; bound states never enter.
inline DecayField evolve_distorted(const TwoScalePotential& P, double epsilon,
                                   const InitialState& state, const std::vector<double>& times,
                                   const DistortedConfig& cfg = {}) {
    if (times.empty()) throw DomainError("evolve_distorted: no output times");
    for (double t : times)
        if (t < 0.0) throw DomainError("evolve_distorted: times must be nonnegative");

    // spectral cutoff from the initial state's own tail
    double peak = 0.0;
    for (const Cplx& v : state.psi) peak = std::max(peak, std::abs(v));
    if (!(peak > 0.0)) throw PreconditionError("evolve_distorted: zero initial state");
    const detail::SpectralTail tail(state.grid, state.psi, 40.0, 0.05);
    double k_spectral = 40.0;
    for (double k = 0.0; k <= 40.0; k += 0.05)
        if (tail.tail_amp(k) < 1e-9 * peak) {
            k_spectral = k;
            break;
        }
    double k_max = cfg.k_max;
    if (k_max <= 0.0)
        k_max = std::max(1.0, k_spectral);
    else if (k_max < k_spectral)
        throw PreconditionError(
            "evolve_distorted: k_max truncates the spectral content of the initial state");

    // integration extent of the initial state
    double x_extent = 0.0;
    for (std::size_t i = 0; i < state.psi.size(); ++i)
        if (std::abs(state.psi[i]) > 1e-13 * peak)
            x_extent = std::max(x_extent, std::abs(state.grid.x(i)));

    SolverConfig scfg = cfg.solver;
    const double atol = scfg.atol > 0.0 ? scfg.atol : 1e-12;
    scfg.L = std::max({scfg.L, auto_truncation_radius(P, atol), x_extent + 1.0,
                       cfg.x_eval_max + 1.0});

    const double t_eff = std::max(1.0, *std::max_element(times.begin(), times.end()));

    UniformGrid eval = make_symmetric_grid(cfg.x_eval_max, cfg.eval_dx);

    auto run_pass = [&](double halving) {
        const detail::DistortedNodes nd = detail::distorted_nodes(k_max, t_eff, halving);
        std::vector<std::vector<Cplx>> acc(times.size(),
                                           std::vector<Cplx>(eval.n, Cplx(0.0, 0.0)));
        for (std::size_t j = 0; j < nd.k.size(); ++j) {
            const double k = nd.k[j];
            const Cplx kc(k, 0.0);
            const JostSolution fp = solve_jost(P, epsilon, kc, Side::plus, scfg);
            const JostSolution fm = solve_jost(P, epsilon, kc, Side::minus, scfg);
            const Cplx w = wronskian(fp, fm).value;
            const Cplx t_coef = Cplx(0.0, -2.0) * kc / w;
            const double abs_t2 = std::norm(t_coef);
            if (abs_t2 > 1.0 + 1e-8)
                throw ConditioningError("evolve_distorted: |t(k)| exceeded 1", std::sqrt(abs_t2));
            // distorted coefficients of the initial state (trapezoid on its grid)
            Cplx cp(0.0, 0.0), cm(0.0, 0.0);
            for (std::size_t i = 0; i < state.psi.size(); ++i) {
                const double y = state.grid.x(i);
                if (std::abs(y) > x_extent) continue;
                const Cplx v = state.psi[i];
                if (std::abs(v) == 0.0) continue;
                cp += std::conj(fp.eval_f(y).first) * v;
                cm += std::conj(fm.eval_f(y).first) * v;
            }
            cp *= state.grid.h;
            cm *= state.grid.h;
            // field factor on the evaluation grid, then per-time accumulation
            std::vector<Cplx> F(eval.n);
            for (std::size_t ix = 0; ix < eval.n; ++ix) {
                const double x = eval.x(ix);
                F[ix] = fp.eval_f(x).first * cp + fm.eval_f(x).first * cm;
            }
            for (std::size_t it = 0; it < times.size(); ++it) {
                const double phase = -k * k * times[it];
                const Cplx mult = nd.weight[j] * abs_t2 *
                                  Cplx(std::cos(phase), std::sin(phase)) / (2.0 * kPi);
                for (std::size_t ix = 0; ix < eval.n; ++ix) acc[it][ix] += mult * F[ix];
            }
        }
        return acc;
    };

    auto fields = run_pass(1.0);
    if (cfg.refine_check) {
        const auto finer = run_pass(0.5);
        for (std::size_t it = 0; it < times.size(); ++it) {
            const DecayMetricsRow a = field_metrics(eval, fields[it], times[it]);
            const DecayMetricsRow b = field_metrics(eval, finer[it], times[it]);
            const double diff = std::abs(a.weighted_sup_p3 - b.weighted_sup_p3);
            if (diff > cfg.refine_tol * (1.0 + b.weighted_sup_p3))
                throw QuadratureError(
                    "evolve_distorted: panel refinement changed the metric at t = " +
                        std::to_string(times[it]),
                    diff);
        }
        fields = finer;
    }

    DecayField out;
    out.method = EvolveMethod::distorted_ft;
    out.grid = eval;
    for (std::size_t it = 0; it < times.size(); ++it) {
        out.metrics.push_back(field_metrics(eval, fields[it], times[it]));
        out.snapshot_times.push_back(times[it]);
        out.snapshots.push_back(std::move(fields[it]));
    }
    return out;
}

struct CrossoverFit {
    double c = 0.0;              // fitted crossover rate in 1/(1 + c t)
    double early_exponent = 0.0; // log-log slope over the early window
    double log_amplitude = 0.0;
    double sse = 0.0;
    std::size_t n_samples = 0;
    std::size_t n_early = 0;
};

// Two-regime fit of the weighted-sup series: log w = A - (1/2) log t -
// log(1 + c t).  The early exponent is an independent straight-line fit over
// t in [1, eps^-4 / 10].
inline CrossoverFit fit_crossover(const std::vector<DecayMetricsRow>& metrics, double epsilon,
                                  double integral_lambda) {
    std::vector<double> ts, ys;
    for (const DecayMetricsRow& r : metrics)
        if (r.t > 0.0 && r.weighted_sup_p3 > 0.0) {
            ts.push_back(r.t);
            ys.push_back(r.weighted_sup_p3);
        }
    if (ts.size() < 5) throw FitError("fit_crossover: need at least five positive samples");
    const double tau = 1.0 / (std::pow(epsilon, 4) * integral_lambda * integral_lambda);
    const double t_lo = ts.front(), t_hi = ts.back();
    if (!(t_hi / t_lo >= 100.0) || !(t_lo < tau) || !(t_hi > tau))
        throw FitError("fit_crossover: samples must span two decades straddling the predicted "
                       "crossover time");
    const TwoRegimeFit base = two_regime_fit(ts, ys);

    const double early_hi = 0.1 / std::pow(epsilon, 4);
    std::vector<double> lt, ly;
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (ts[i] >= 1.0 && ts[i] <= early_hi) {
            lt.push_back(std::log(ts[i]));
            ly.push_back(std::log(ys[i]));
        }
    if (lt.size() < 3)
        throw FitError("fit_crossover: fewer than three samples in the early-time window");
    const OlsFit early = ols_fit(lt, ly);

    CrossoverFit out;
    out.c = base.c;
    out.early_exponent = early.slope;
    out.log_amplitude = base.log_amplitude;
    out.sse = base.sse;
    out.n_samples = ts.size();
    out.n_early = lt.size();
    return out;
}

}  // namespace scat1d
