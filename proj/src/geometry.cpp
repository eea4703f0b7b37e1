// SPDX-License-Identifier: Apache-2.0
#include "basisrisk/geometry.hpp"

#include <stdexcept>

#include "basisrisk/kernels.hpp"

namespace basisrisk {

double disk_square_coverage_probability(Point p, double r, std::size_t grid_n) {
    if (grid_n < kMinGridN)
        throw std::invalid_argument("grid_n: must be >= 100 for coverage quadrature");
    if (!(r >= 0.0)) throw std::invalid_argument("radius: must be >= 0");
    const auto& k = kernels::active();
    const double h = 1.0 / static_cast<double>(grid_n);
    kernels::CoverageCounts counts;
    for (std::size_t j = 0; j < grid_n; ++j)
        k.classify_row((static_cast<double>(j) + 0.5) * h, h, grid_n, p, p, r, counts);
    return static_cast<double>(counts.both) / static_cast<double>(grid_n * grid_n);
}

}  // namespace basisrisk
