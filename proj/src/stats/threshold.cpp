// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "basisrisk/parallel.hpp"
#include "basisrisk/random.hpp"
#include "basisrisk/stats.hpp"

namespace basisrisk::stats {

namespace {

// Prefix sums over x-sorted, mean-centred data; SSR of an OLS line on any
// contiguous run of points in O(1).
struct PrefixMoments {
    std::vector<double> sx, sxx, sy, sxy, syy;

    PrefixMoments(std::span<const double> x, std::span<const double> y)
        : sx(x.size() + 1), sxx(x.size() + 1), sy(x.size() + 1), sxy(x.size() + 1),
          syy(x.size() + 1) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            sx[i + 1] = sx[i] + x[i];
            sxx[i + 1] = sxx[i] + x[i] * x[i];
            sy[i + 1] = sy[i] + y[i];
            sxy[i + 1] = sxy[i] + x[i] * y[i];
            syy[i + 1] = syy[i] + y[i] * y[i];
        }
    }

    double ssr(std::size_t lo, std::size_t hi) const {
        const double n = static_cast<double>(hi - lo);
        const double mx = sx[hi] - sx[lo], my = sy[hi] - sy[lo];
        const double cxx = (sxx[hi] - sxx[lo]) - mx * mx / n;
        const double cxy = (sxy[hi] - sxy[lo]) - mx * my / n;
        const double cyy = (syy[hi] - syy[lo]) - my * my / n;
        // A regime of tied x has no slope; only rounding noise survives in cxx.
        const double explained =
            cxx > 1e-12 * (sxx[hi] - sxx[lo]) && cxx > 0.0 ? cxy * cxy / cxx : 0.0;
        return std::max(0.0, cyy - explained);
    }
};

struct SplitSearch {
    double sup_f = 0.0;
    double ssr_linear = 0.0;
    double ssr_split = 0.0;
    std::size_t best = 0;  // index into the candidate split list
};

// splits[k] = number of leading sorted points in the low regime.
SplitSearch best_split(std::span<const double> xc, std::span<const double> yc,
                   std::span<const std::size_t> splits) {
    const PrefixMoments pm(xc, yc);
    const std::size_t n = xc.size();
    SplitSearch s;
    s.ssr_linear = pm.ssr(0, n);
    s.ssr_split = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < splits.size(); ++k) {
        const double v = pm.ssr(0, splits[k]) + pm.ssr(splits[k], n);
        if (v < s.ssr_split) {
            s.ssr_split = v;
            s.best = k;
        }
    }
    const double dn = static_cast<double>(n);
    s.sup_f = s.ssr_split > 0.0 ? dn * (s.ssr_linear - s.ssr_split) / s.ssr_split
                                : std::numeric_limits<double>::infinity();
    return s;
}

}  // namespace

ThresholdFit threshold_regression(std::span<const double> x, std::span<const double> y,
                                  const ThresholdOptions& opts) {
    if (x.size() != y.size()) throw std::invalid_argument("threshold: length mismatch");
    const std::size_t n = x.size();
    if (n < 20) throw std::invalid_argument("threshold: needs at least 20 points");
    if (!(opts.trim > 0.0 && opts.trim <= 0.25))
        throw std::invalid_argument("threshold: trim must lie in (0, 0.25]");
    if (opts.bootstrap_reps < 1)
        throw std::invalid_argument("threshold: bootstrap_reps must be >= 1");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = x[order[i]];
        ys[i] = y[order[i]];
    }
    if (xs.front() == xs.back())
        throw std::invalid_argument("threshold: all x values are equal");

    const auto lo_idx = static_cast<std::size_t>(std::floor(opts.trim * static_cast<double>(n)));
    const auto hi_idx = std::min(
        n - 1, static_cast<std::size_t>(std::ceil((1.0 - opts.trim) * static_cast<double>(n))) - 1);
    std::vector<std::size_t> splits;
    std::vector<double> taus;
    for (std::size_t i = lo_idx; i <= hi_idx; ++i) {
        if (i + 1 < n && xs[i + 1] == xs[i]) continue;  // split after the last tie
        const std::size_t k = i + 1;
        if (k < opts.min_regime || n - k < opts.min_regime) continue;
        splits.push_back(k);
        taus.push_back(xs[i]);
    }
    if (splits.empty())
        throw std::invalid_argument("threshold: no candidate split leaves enough points "
                                    "in both regimes");

    const double mx = mean(xs), my = mean(ys);
    std::vector<double> xc(n), yc(n);
    for (std::size_t i = 0; i < n; ++i) {
        xc[i] = xs[i] - mx;
        yc[i] = ys[i] - my;
    }
    const SplitSearch observed = best_split(xc, yc, splits);

    ThresholdFit fit;
    fit.candidates = splits.size();
    fit.tau = taus[observed.best];
    fit.sup_f = observed.sup_f;
    fit.ssr_linear = observed.ssr_linear;
    fit.ssr_split = observed.ssr_split;
    const std::size_t k = splits[observed.best];
    fit.n_low = k;
    fit.n_high = n - k;
    const std::span<const double> xs_s(xs), ys_s(ys);
    const LinearFit low = ols(xs_s.first(k), ys_s.first(k));
    const LinearFit high = ols(xs_s.subspan(k), ys_s.subspan(k));
    fit.low_slope = low.slope;
    fit.low_intercept = low.intercept;
    fit.r2_low = low.r_squared;
    fit.high_slope = high.slope;
    fit.high_intercept = high.intercept;
    fit.r2_high = high.r_squared;

    // Residual bootstrap under the single-line null.
    const LinearFit null_fit = ols(xc, yc);
    std::vector<double> fitted(n), resid(n);
    for (std::size_t i = 0; i < n; ++i) {
        fitted[i] = null_fit.intercept + null_fit.slope * xc[i];
        resid[i] = yc[i] - fitted[i];
    }
    std::vector<double> boot_f(opts.bootstrap_reps);
    parallel_for(opts.bootstrap_reps, opts.threads, [&](std::size_t rep) {
        Stream stream(opts.seed, StreamDomain::bootstrap, {opts.stream_key, rep});
        std::vector<double> yb(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto pick = std::min(n - 1, static_cast<std::size_t>(stream.uniform() *
                                                                       static_cast<double>(n)));
            yb[i] = fitted[i] + resid[pick];
        }
        boot_f[rep] = best_split(xc, yb, splits).sup_f;
    });
    const auto exceed = std::count_if(boot_f.begin(), boot_f.end(),
                                      [&](double f) { return f >= observed.sup_f; });
    fit.p_value = static_cast<double>(exceed) / static_cast<double>(opts.bootstrap_reps);
    return fit;
}

}  // namespace basisrisk::stats
