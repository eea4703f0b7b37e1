// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>

#include "basisrisk/geometry.hpp"

namespace basisrisk {

struct Contract {
    Point exposure;
    Point station;
    double threshold = 5.0;
    double premium = 1.0;
};

struct HazardEvent {
    Point centroid;
    double radius = 0.0;
    double severity = 0.0;
};

/// payout in {0,1}, loss in {-1,0}, basis_risk = payout + loss.
struct YearOutcome {
    int payout = 0;
    int loss = 0;
    int basis_risk = 0;

    friend bool operator==(const YearOutcome&, const YearOutcome&) = default;
};

enum class StdevDivisor { sample, population };

struct SimulationConfig {
    double rmax = 0.5;
    double smax = 20.0;
    double tmax = 10.0;
    double rmin = 0.005;
    std::size_t m = 100;
    std::size_t n = 1000;
    std::uint64_t seed = 42;
    std::size_t grid_n = kDefaultGridN;
    StdevDivisor divisor = StdevDivisor::sample;
    // 0 selects std::thread::hardware_concurrency(). Never affects results.
    unsigned threads = 0;

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

/// Law of the per-year hazard draw. Radius is uniform on
/// [radius_lo, radius_hi]; a degenerate range pins the radius while still
/// consuming its draw.
struct EventLaw {
    double radius_lo = 0.0;
    double radius_hi = 0.5;
    double smax = 20.0;

    static EventLaw from(const SimulationConfig& cfg) { return {0.0, cfg.rmax, cfg.smax}; }
    static EventLaw fixed_radius(double r, double smax) { return {r, r, smax}; }
};

YearOutcome evaluate_year(const Contract& c, const HazardEvent& e);

/// Distance between exposure and station over footprint radius. Throws
/// std::invalid_argument for r <= 0.
double spatial_ratio(const Contract& c, double r);

/// Four draws, in order: centroid x, centroid y, radius, severity.
template <UniformSource S>
HazardEvent sample_event(S& stream, const EventLaw& law) {
    HazardEvent e;
    e.centroid = sample_point(stream);
    e.radius = law.radius_lo + (law.radius_hi - law.radius_lo) * stream.uniform();
    e.severity = law.smax * stream.uniform();
    return e;
}

template <UniformSource S>
HazardEvent sample_event(S& stream, const SimulationConfig& cfg) {
    return sample_event(stream, EventLaw::from(cfg));
}

/// Threshold in (0, tmax]: tmax * (1 - u) with u in [0,1).
inline double threshold_from_uniform(double u, double tmax) { return tmax * (1.0 - u); }

/// Five draws, in order: exposure x, y, station x, y, threshold.
template <UniformSource S>
Contract sample_contract(S& stream, const SimulationConfig& cfg) {
    Contract c;
    c.exposure = sample_point(stream);
    c.station = sample_point(stream);
    c.threshold = threshold_from_uniform(stream.uniform(), cfg.tmax);
    c.premium = 1.0;
    return c;
}

}  // namespace basisrisk
