// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>

namespace basisrisk {

/// Location on the unit square. Sampled points lie in [0,1]^2; derived
/// geometry may leave it.
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Closed circular footprint.
struct Disk {
    Point center;
    double radius = 0.0;
};

/// Anything that yields uniform doubles on [0,1). Samplers are written
/// against this so tests can inject fixed draw sequences.
template <typename S>
concept UniformSource = requires(S& s) {
    { s.uniform() } -> std::same_as<double>;
};

inline double distance(Point p, Point q) {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    return std::sqrt(dx * dx + dy * dy);
}

/// Boundary counts as covered. The batch kernels use the same expression,
/// so scalar and vector paths agree bit for bit.
inline bool covers(const Disk& d, Point p) {
    return distance(d.center, p) <= d.radius;
}

template <UniformSource S>
Point sample_point(S& stream) {
    const double x = stream.uniform();
    const double y = stream.uniform();
    return {x, y};
}

inline constexpr std::size_t kMinGridN = 100;
inline constexpr std::size_t kDefaultGridN = 2000;

/// Area of {c in [0,1]^2 : |c - p| <= r}, i.e. the probability a uniform
/// centroid's footprint of radius r covers p. Midpoint rule on a
/// grid_n x grid_n grid. Throws std::invalid_argument for grid_n < 100 or
/// negative r.
double disk_square_coverage_probability(Point p, double r,
                                        std::size_t grid_n = kDefaultGridN);

}  // namespace basisrisk
