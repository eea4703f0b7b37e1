// SPDX-License-Identifier: Apache-2.0
//
// Batch kernels for the hot loops: per-year trigger evaluation, quadrature
// grid classification and integer basis-risk reductions. Each kernel has a
// scalar reference and, on x86-64, an AVX2 variant chosen at runtime. All
// variants produce bit-identical results: the floating-point work is the
// same sequence of correctly rounded operations (no contraction), and the
// reductions are exact integer arithmetic.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "basisrisk/geometry.hpp"

namespace basisrisk::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);
std::optional<Isa> parse_isa(std::string_view name);

/// Structure-of-arrays view of n hazard events.
struct EventColumns {
    std::span<const double> cx;
    std::span<const double> cy;
    std::span<const double> radius;
    std::span<const double> severity;

    std::size_t size() const { return cx.size(); }
};

struct ContractGeometry {
    Point exposure;
    Point station;
    double threshold = 0.0;
};

struct CoverageCounts {
    std::uint64_t both = 0;
    std::uint64_t station_only = 0;
    std::uint64_t exposure_only = 0;
    std::uint64_t neither = 0;

    friend bool operator==(const CoverageCounts&, const CoverageCounts&) = default;
};

struct IntMoments {
    std::int64_t sum = 0;
    std::int64_t sum_sq = 0;

    friend bool operator==(const IntMoments&, const IntMoments&) = default;
};

struct KernelTable {
    Isa isa;
    /// br[j] = basis risk of the contract under event j.
    void (*evaluate_years)(const ContractGeometry& c, const EventColumns& events,
                           std::span<std::int8_t> br);
    /// Classifies the grid_n cell midpoints ((i + 0.5) * h, y) of one
    /// quadrature row by footprint coverage of exposure and station, and
    /// adds the counts to acc.
    void (*classify_row)(double y, double h, std::size_t grid_n, Point exposure,
                         Point station, double r, CoverageCounts& acc);
    IntMoments (*moments_i8)(std::span<const std::int8_t> v);
    IntMoments (*moments_i32)(std::span<const std::int32_t> v);
    /// dst[j] += src[j].
    void (*accumulate_i8)(std::span<const std::int8_t> src, std::span<std::int32_t> dst);
};

const KernelTable& scalar_table();
/// nullptr when not compiled in or unsupported by this CPU.
const KernelTable* avx2_table();

/// Process-wide selection. Initialised from BASISRISK_KERNEL
/// (auto|scalar|avx2), otherwise the best supported variant.
const KernelTable& active();
/// Throws std::invalid_argument if the requested variant is unavailable.
void select(Isa isa);
void select_best();

}  // namespace basisrisk::kernels
