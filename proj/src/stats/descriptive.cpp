// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "basisrisk/stats.hpp"

namespace basisrisk::stats {

double mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean: empty input");
    // Shifted by the first value so a constant input returns that value exactly.
    const double ref = v.front();
    double acc = 0.0;
    for (double x : v) acc += x - ref;
    return ref + acc / static_cast<double>(v.size());
}

double sample_stdev(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double mu = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - mu) * (x - mu);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    if (x.size() < 3) throw std::invalid_argument("pearson: needs at least 3 points");
    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::invalid_argument("pearson: zero variance input, correlation undefined");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

LinearFit ols(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("ols: length mismatch");
    if (x.empty()) throw std::invalid_argument("ols: empty input");
    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    LinearFit f;
    f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ssr += r * r;
    }
    f.ssr = ssr;
    f.r_squared = syy > 0.0 ? 1.0 - ssr / syy : (ssr == 0.0 ? 1.0 : 0.0);
    return f;
}

std::vector<BinSummary> bin_summary(std::span<const double> x, std::span<const double> y,
                                    double width, double origin) {
    if (!(width > 0.0)) throw std::invalid_argument("bin_summary: width must be > 0");
    if (x.size() != y.size()) throw std::invalid_argument("bin_summary: length mismatch");
    std::map<long long, std::vector<double>> bins;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto k = static_cast<long long>(std::floor((x[i] - origin) / width));
        bins[k].push_back(y[i]);
    }
    std::vector<BinSummary> out;
    out.reserve(bins.size());
    for (const auto& [k, values] : bins) {
        BinSummary b;
        b.bin_low = origin + static_cast<double>(k) * width;
        b.bin_high = origin + static_cast<double>(k + 1) * width;
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        b.min = *lo;
        b.max = *hi;
        b.mean = std::clamp(mean(values), b.min, b.max);
        b.std = sample_stdev(values);
        b.count = values.size();
        out.push_back(b);
    }
    return out;
}

}  // namespace basisrisk::stats
