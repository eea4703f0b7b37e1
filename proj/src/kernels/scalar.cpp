// SPDX-License-Identifier: Apache-2.0
#include "basisrisk/kernels.hpp"
#include "basisrisk/model.hpp"
#include "kernels_internal.hpp"

namespace basisrisk::kernels {

namespace {

void evaluate_years(const ContractGeometry& g, const EventColumns& ev,
                    std::span<std::int8_t> br) {
    const Contract c{g.exposure, g.station, g.threshold, 1.0};
    for (std::size_t j = 0; j < ev.size(); ++j) {
        const HazardEvent e{{ev.cx[j], ev.cy[j]}, ev.radius[j], ev.severity[j]};
        br[j] = static_cast<std::int8_t>(evaluate_year(c, e).basis_risk);
    }
}

void classify_row(double y, double h, std::size_t grid_n, Point exposure, Point station,
                  double r, CoverageCounts& acc) {
    std::uint64_t both = 0, s_only = 0, e_only = 0;
    for (std::size_t i = 0; i < grid_n; ++i) {
        const Disk d{{(static_cast<double>(i) + 0.5) * h, y}, r};
        const bool s = covers(d, station);
        const bool e = covers(d, exposure);
        both += s && e;
        s_only += s && !e;
        e_only += e && !s;
    }
    acc.both += both;
    acc.station_only += s_only;
    acc.exposure_only += e_only;
    acc.neither += grid_n - both - s_only - e_only;
}

IntMoments moments_i8(std::span<const std::int8_t> v) {
    IntMoments m;
    for (std::int8_t b : v) {
        m.sum += b;
        m.sum_sq += static_cast<std::int64_t>(b) * b;
    }
    return m;
}

IntMoments moments_i32(std::span<const std::int32_t> v) {
    IntMoments m;
    for (std::int32_t b : v) {
        m.sum += b;
        m.sum_sq += static_cast<std::int64_t>(b) * b;
    }
    return m;
}

void accumulate_i8(std::span<const std::int8_t> src, std::span<std::int32_t> dst) {
    for (std::size_t j = 0; j < src.size(); ++j) dst[j] += src[j];
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{Isa::scalar, evaluate_years, classify_row, moments_i8,
                                   moments_i32, accumulate_i8};
    return table;
}

}  // namespace basisrisk::kernels
