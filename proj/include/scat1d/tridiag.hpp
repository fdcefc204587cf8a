#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "scat1d/errors.hpp"

namespace scat1d {

// Symmetric tridiagonal matrix: diagonal d (size n), off-diagonal e (size n-1).
struct SymTridiag {
    std::vector<double> d;
    std::vector<double> e;

    std::size_t size() const { return d.size(); }
};

// Number of eigenvalues strictly below lambda (Sturm sequence count).
inline int sturm_count_below(const SymTridiag& T, double lambda) {
    const std::size_t n = T.size();
    int count = 0;
    double q = T.d[0] - lambda;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        if (q == 0.0) q = -1e-300;  // boundary hit: treat as just below
        q = (T.d[i] - lambda) - T.e[i - 1] * T.e[i - 1] / q;
        if (q < 0.0) ++count;
    }
    return count;
}

inline double gershgorin_lower_bound(const SymTridiag& T) {
    const std::size_t n = T.size();
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(T.e[i - 1]);
        if (i + 1 < n) r += std::abs(T.e[i]);
        lo = std::min(lo, T.d[i] - r);
    }
    return lo;
}

// All eigenvalues strictly below `cutoff`, ascending, by Sturm bisection.
inline std::vector<double> tridiag_eigenvalues_below(const SymTridiag& T, double cutoff,
                                                     double tol = 1e-13) {
    std::vector<double> out;
    const int m = sturm_count_below(T, cutoff);
    if (m <= 0) return out;
    const double lo0 = gershgorin_lower_bound(T);
    out.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        double lo = lo0, hi = cutoff;
        while (hi - lo > tol * (1.0 + std::abs(lo) + std::abs(hi))) {
            const double mid = 0.5 * (lo + hi);
            if (sturm_count_below(T, mid) >= j + 1)
                hi = mid;
            else
                lo = mid;
        }
        out.push_back(0.5 * (lo + hi));
    }
    return out;
}

// LU factorization of (T - lambda I) with partial pivoting (banded, second
// superdiagonal fill-in), for inverse iteration near an eigenvalue.
class ShiftedTridiagLU {
  public:
    ShiftedTridiagLU(const SymTridiag& T, double lambda) {
        const std::size_t n = T.size();
        dd_.resize(n);
        du_.assign(n > 1 ? n - 1 : 0, 0.0);
        du2_.assign(n > 2 ? n - 2 : 0, 0.0);
        dl_.assign(n > 1 ? n - 1 : 0, 0.0);
        swap_.assign(n > 1 ? n - 1 : 0, false);
        for (std::size_t i = 0; i < n; ++i) dd_[i] = T.d[i] - lambda;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            du_[i] = T.e[i];
            dl_[i] = T.e[i];
        }
        const double tiny = 1e-300;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::abs(dd_[i]) >= std::abs(dl_[i])) {
                if (dd_[i] == 0.0) dd_[i] = tiny;
                const double fac = dl_[i] / dd_[i];
                dl_[i] = fac;  // store multiplier
                dd_[i + 1] -= fac * du_[i];
            } else {
                swap_[i] = true;
                const double fac = dd_[i] / dl_[i];
                dd_[i] = dl_[i];
                dl_[i] = fac;
                const double tmp = du_[i];
                du_[i] = dd_[i + 1];
                dd_[i + 1] = tmp - fac * dd_[i + 1];
                if (i + 2 < n) {
                    du2_[i] = du_[i + 1];
                    du_[i + 1] = -fac * du_[i + 1];
                }
            }
        }
        if (dd_[n - 1] == 0.0) dd_[n - 1] = tiny;
    }

    void solve_inplace(std::vector<double>& b) const {
        const std::size_t n = dd_.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (swap_[i]) std::swap(b[i], b[i + 1]);
            b[i + 1] -= dl_[i] * b[i];
        }
        b[n - 1] /= dd_[n - 1];
        if (n >= 2) {
            const std::size_t i = n - 2;
            b[i] = (b[i] - du_[i] * b[i + 1]) / dd_[i];
        }
        for (std::size_t ii = n; ii >= 3; --ii) {
            const std::size_t i = ii - 3;
            double s = b[i] - du_[i] * b[i + 1];
            if (i < du2_.size()) s -= du2_[i] * b[i + 2];
            b[i] = s / dd_[i];
        }
    }

  private:
    std::vector<double> dd_, du_, du2_, dl_;
    std::vector<bool> swap_;
};

// Normalized eigenvector for an eigenvalue estimate, by inverse iteration.
inline std::vector<double> inverse_iteration(const SymTridiag& T, double lambda,
                                             int iterations = 4) {
    const std::size_t n = T.size();
    ShiftedTridiagLU lu(T, lambda);
    std::vector<double> v(n);
    // deterministic pseudo-random start to avoid accidental orthogonality
    std::uint64_t s = 0x9e3779b97f4a7c15ULL;
    for (std::size_t i = 0; i < n; ++i) {
        s ^= s << 13; s ^= s >> 7; s ^= s << 17;
        v[i] = 0.5 + static_cast<double>(s % 1000003) / 1000003.0;
    }
    for (int it = 0; it < iterations; ++it) {
        lu.solve_inplace(v);
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw SolverError("inverse_iteration: vector collapsed", lambda);
        for (double& x : v) x /= norm;
    }
    // fix overall sign: make the largest-magnitude entry positive
    double best = 0.0;
    for (double x : v)
        if (std::abs(x) > std::abs(best)) best = x;
    if (best < 0.0)
        for (double& x : v) x = -x;
    return v;
}

// Thomas factorization of a complex tridiagonal system (no pivoting; intended
// for diagonally dominant matrices).  Factor once, solve many times.
class ComplexTridiagThomas {
  public:
    using C = std::complex<double>;

    ComplexTridiagThomas(std::vector<C> sub, std::vector<C> diag, std::vector<C> super)
        : a_(std::move(sub)), bp_(std::move(diag)), cp_(std::move(super)) {
        const std::size_t n = bp_.size();
        if (a_.size() + 1 != n || cp_.size() + 1 != n)
            throw ConstructionError("ComplexTridiagThomas: band sizes do not match");
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0) bp_[i] -= a_[i - 1] * cp_[i - 1];
            if (std::abs(bp_[i]) == 0.0)
                throw SolverError("ComplexTridiagThomas: zero pivot", static_cast<double>(i));
            if (i + 1 < n) cp_[i] /= bp_[i];
        }
    }

    void solve_inplace(std::vector<C>& r) const {
        const std::size_t n = bp_.size();
        r[0] /= bp_[0];
        for (std::size_t i = 1; i < n; ++i) r[i] = (r[i] - a_[i - 1] * r[i - 1]) / bp_[i];
        for (std::size_t ii = n - 1; ii >= 1; --ii) r[ii - 1] -= cp_[ii - 1] * r[ii];
    }

  private:
    std::vector<C> a_, bp_, cp_;
};

}  // namespace scat1d
