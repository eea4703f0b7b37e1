// SPDX-License-Identifier: Apache-2.0
#include "basisrisk/model.hpp"

#include <stdexcept>
#include <string>

namespace basisrisk {

void SimulationConfig::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
    if (!(rmax > 0.0)) fail("rmax: must satisfy 0 < Rmax");
    if (!(smax > 0.0)) fail("smax: must satisfy 0 < Smax");
    if (!(tmax > 0.0)) fail("tmax: must satisfy 0 < t_max");
    if (!(tmax <= smax)) fail("tmax: must satisfy t_max <= Smax");
    if (!(rmin >= 0.0)) fail("rmin: must satisfy 0 <= r_min");
    if (!(rmin < rmax)) fail("rmin: must satisfy r_min < Rmax");
    if (m < 1) fail("m: must satisfy m >= 1");
    if (n < 1) fail("n: must satisfy n >= 1");
    if (grid_n < kMinGridN) fail("grid_n: must satisfy grid_n >= 100");
}

YearOutcome evaluate_year(const Contract& c, const HazardEvent& e) {
    YearOutcome out;
    if (e.severity >= c.threshold) {
        const Disk footprint{e.centroid, e.radius};
        out.payout = covers(footprint, c.station) ? 1 : 0;
        out.loss = covers(footprint, c.exposure) ? -1 : 0;
    }
    out.basis_risk = out.payout + out.loss;
    return out;
}

double spatial_ratio(const Contract& c, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("spatial_ratio: radius must be > 0");
    return distance(c.exposure, c.station) / r;
}

}  // namespace basisrisk
