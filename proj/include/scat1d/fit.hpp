#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "scat1d/errors.hpp"
#include "scat1d/rootfind.hpp"

namespace scat1d {

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Ordinary least squares y = slope * x + intercept.
inline OlsFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw FitError("ols_fit: need at least two matched samples");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw FitError("ols_fit: abscissae are degenerate");
    OlsFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

namespace detail {

inline std::vector<double> average_ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;  // average rank, 1-based
        for (std::size_t t = i; t <= j; ++t) rank[idx[t]] = r;
        i = j + 1;
    }
    return rank;
}

}  // namespace detail

// Spearman rank correlation (average ranks for ties).
inline double spearman_rho(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    if (n != b.size() || n < 3) throw FitError("spearman_rho: need at least three matched samples");
    const std::vector<double> ra = detail::average_ranks(a);
    const std::vector<double> rb = detail::average_ranks(b);
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
        sab += (ra[i] - ma) * (rb[i] - mb);
    }
    if (!(saa > 0.0) || !(sbb > 0.0))
        throw FitError("spearman_rho: a sample is constant, correlation undefined");
    return sab / std::sqrt(saa * sbb);
}

struct TwoRegimeFit {
    double log_amplitude = 0.0;  // A in log y = A - (1/2) log t - log(1 + c t)
    double c = 0.0;
    double sse = 0.0;
};

// Least-squares fit of log y = A - (1/2) log t - log(1 + c t) over c >= 0,
// with the optimal A eliminated in closed form for each c.  The search runs
// over log c (coarse scan + golden-section refinement); a best value at the
// scan boundary is returned as-is (degenerate inputs push c to 0 or infinity).
template <typename TList, typename YList>
TwoRegimeFit two_regime_fit(const TList& ts, const YList& ys) {
    const std::size_t n = ts.size();
    if (n != static_cast<std::size_t>(ys.size()) || n < 5)
        throw FitError("two_regime_fit: need at least five samples");
    std::vector<double> logt(n), logy(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(ts[i] > 0.0) || !(ys[i] > 0.0))
            throw FitError("two_regime_fit: samples must be positive");
        logt[i] = std::log(ts[i]);
        logy[i] = std::log(ys[i]);
    }
    auto sse_of = [&](double log_c) {
        const double c = std::exp(log_c);
        double a = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            a += logy[i] + 0.5 * logt[i] + std::log1p(c * ts[i]);
        a /= static_cast<double>(n);
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = logy[i] - (a - 0.5 * logt[i] - std::log1p(c * ts[i]));
            sse += r * r;
        }
        return sse;
    };
    const double lo = std::log(1e-9), hi = std::log(1e6);
    const int coarse = 121;
    int best = 0;
    double best_sse = sse_of(lo);
    for (int i = 1; i < coarse; ++i) {
        const double lc = lo + (hi - lo) * i / (coarse - 1.0);
        const double s = sse_of(lc);
        if (s < best_sse) {
            best_sse = s;
            best = i;
        }
    }
    const double step = (hi - lo) / (coarse - 1.0);
    const double wa = lo + step * std::max(0, best - 1);
    const double wb = lo + step * std::min(coarse - 1, best + 1);
    const double log_c = golden_min(sse_of, wa, wb, 1e-12);
    TwoRegimeFit fit;
    fit.c = std::exp(log_c);
    fit.sse = sse_of(log_c);
    double a = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        a += logy[i] + 0.5 * logt[i] + std::log1p(fit.c * ts[i]);
    fit.log_amplitude = a / static_cast<double>(n);
    return fit;
}

}  // namespace scat1d
