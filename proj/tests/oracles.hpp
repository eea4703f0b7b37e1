// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference computations. Nothing here calls into the library's
// numeric paths; each is an independent route to the value it checks.
#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace oracle {

/// Replays a fixed list of uniforms.
struct FixedDraws {
    std::vector<double> values;
    std::size_t next = 0;
    double uniform() { return values.at(next++); }
};

inline double disk_area(double r) { return std::numbers::pi * r * r; }

/// Intersection area of two radius-r disks whose centres are d apart.
inline double lens_area(double r, double d) {
    if (d >= 2.0 * r) return 0.0;
    return 2.0 * r * r * std::acos(d / (2.0 * r)) - 0.5 * d * std::sqrt(4.0 * r * r - d * d);
}

/// Brute-force sample standard deviation in long double.
template <typename T>
double sample_stdev(const std::vector<T>& v) {
    long double mu = 0.0L;
    for (T x : v) mu += static_cast<long double>(x);
    mu /= static_cast<long double>(v.size());
    long double ss = 0.0L;
    for (T x : v) ss += (static_cast<long double>(x) - mu) * (static_cast<long double>(x) - mu);
    return static_cast<double>(std::sqrt(ss / static_cast<long double>(v.size() - 1)));
}

template <typename T>
double mean(const std::vector<T>& v) {
    long double s = 0.0L;
    for (T x : v) s += static_cast<long double>(x);
    return static_cast<double>(s / static_cast<long double>(v.size()));
}

/// Monte Carlo estimate of the coverage probability of p by a uniform
/// centroid, by rejection on a deterministic low-discrepancy lattice.
inline double lattice_coverage(double px, double py, double r, std::size_t n) {
    std::size_t hit = 0;
    const double a1 = 0.7548776662466927, a2 = 0.5698402909980532;  // R2 sequence
    double u = 0.5, v = 0.5;
    for (std::size_t i = 0; i < n; ++i) {
        u += a1;
        v += a2;
        u -= std::floor(u);
        v -= std::floor(v);
        hit += (u - px) * (u - px) + (v - py) * (v - py) <= r * r;
    }
    return static_cast<double>(hit) / static_cast<double>(n);
}

/// Central finite-difference gradient of f at p.
template <typename F, typename P>
P central_gradient(F&& f, P p, double rel_step = 1e-6) {
    P g{};
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double h = rel_step * std::max(1.0, std::abs(p[k]));
        P hi = p, lo = p;
        hi[k] += h;
        lo[k] -= h;
        g[k] = (f(hi) - f(lo)) / (2.0 * h);
    }
    return g;
}

}  // namespace oracle
