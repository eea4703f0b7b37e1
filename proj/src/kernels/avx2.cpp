// SPDX-License-Identifier: Apache-2.0
// AVX2 kernel variants. Compiled with -mavx2 (no FMA) and
// -ffp-contract=off so lane arithmetic matches the scalar reference.
#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "kernels_internal.hpp"

namespace basisrisk::kernels {

namespace {

inline __m256d covered(__m256d cx, __m256d cy, __m256d px, __m256d py, __m256d r) {
    const __m256d dx = _mm256_sub_pd(cx, px);
    const __m256d dy = _mm256_sub_pd(cy, py);
    const __m256d d = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
    return _mm256_cmp_pd(d, r, _CMP_LE_OQ);
}

inline bool covered1(double cx, double cy, Point p, double r) {
    const double dx = cx - p.x;
    const double dy = cy - p.y;
    return std::sqrt(dx * dx + dy * dy) <= r;
}

void evaluate_years(const ContractGeometry& g, const EventColumns& ev,
                    std::span<std::int8_t> br) {
    const std::size_t n = ev.size();
    const __m256d ex = _mm256_set1_pd(g.exposure.x), ey = _mm256_set1_pd(g.exposure.y);
    const __m256d sx = _mm256_set1_pd(g.station.x), sy = _mm256_set1_pd(g.station.y);
    const __m256d t = _mm256_set1_pd(g.threshold);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d cx = _mm256_loadu_pd(ev.cx.data() + j);
        const __m256d cy = _mm256_loadu_pd(ev.cy.data() + j);
        const __m256d r = _mm256_loadu_pd(ev.radius.data() + j);
        const __m256d trig = _mm256_cmp_pd(_mm256_loadu_pd(ev.severity.data() + j), t, _CMP_GE_OQ);
        const int pay = _mm256_movemask_pd(_mm256_and_pd(trig, covered(cx, cy, sx, sy, r)));
        const int loss = _mm256_movemask_pd(_mm256_and_pd(trig, covered(cx, cy, ex, ey, r)));
        for (int k = 0; k < 4; ++k)
            br[j + k] = static_cast<std::int8_t>(((pay >> k) & 1) - ((loss >> k) & 1));
    }
    for (; j < n; ++j) {
        if (!(ev.severity[j] >= g.threshold)) {
            br[j] = 0;
            continue;
        }
        const int pay = covered1(ev.cx[j], ev.cy[j], g.station, ev.radius[j]);
        const int loss = covered1(ev.cx[j], ev.cy[j], g.exposure, ev.radius[j]);
        br[j] = static_cast<std::int8_t>(pay - loss);
    }
}

void classify_row(double y, double h, std::size_t grid_n, Point exposure, Point station,
                  double r, CoverageCounts& acc) {
    const __m256d vy = _mm256_set1_pd(y), vh = _mm256_set1_pd(h), half = _mm256_set1_pd(0.5);
    const __m256d vr = _mm256_set1_pd(r);
    const __m256d ex = _mm256_set1_pd(exposure.x), ey = _mm256_set1_pd(exposure.y);
    const __m256d sx = _mm256_set1_pd(station.x), sy = _mm256_set1_pd(station.y);
    const __m256d lane = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
    std::uint64_t both = 0, s_only = 0, e_only = 0;
    std::size_t i = 0;
    for (; i + 4 <= grid_n; i += 4) {
        const __m256d idx = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(i)), lane);
        const __m256d cx = _mm256_mul_pd(_mm256_add_pd(idx, half), vh);
        const int s = _mm256_movemask_pd(covered(cx, vy, sx, sy, vr));
        const int e = _mm256_movemask_pd(covered(cx, vy, ex, ey, vr));
        both += __builtin_popcount(static_cast<unsigned>(s & e));
        s_only += __builtin_popcount(static_cast<unsigned>(s & ~e));
        e_only += __builtin_popcount(static_cast<unsigned>(e & ~s));
    }
    for (; i < grid_n; ++i) {
        const double cx = (static_cast<double>(i) + 0.5) * h;
        const bool s = covered1(cx, y, station, r);
        const bool e = covered1(cx, y, exposure, r);
        both += s && e;
        s_only += s && !e;
        e_only += e && !s;
    }
    acc.both += both;
    acc.station_only += s_only;
    acc.exposure_only += e_only;
    acc.neither += grid_n - both - s_only - e_only;
}

inline std::int64_t hsum_epi32(__m256i v) {
    const __m256i wide_lo = _mm256_cvtepi32_epi64(_mm256_castsi256_si128(v));
    const __m256i wide_hi = _mm256_cvtepi32_epi64(_mm256_extracti128_si256(v, 1));
    const __m256i s = _mm256_add_epi64(wide_lo, wide_hi);
    alignas(32) std::int64_t out[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(out), s);
    return out[0] + out[1] + out[2] + out[3];
}

inline std::int64_t hsum_epi64(__m256i v) {
    alignas(32) std::int64_t out[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(out), v);
    return out[0] + out[1] + out[2] + out[3];
}

IntMoments moments_i8(std::span<const std::int8_t> v) {
    // int32 lane accumulators are flushed every kBlock elements; at most
    // kBlock/8 squares of magnitude <= 2^14 land in one lane per block.
    constexpr std::size_t kBlock = 4096;
    const __m256i ones = _mm256_set1_epi16(1);
    IntMoments m;
    std::size_t j = 0;
    const std::size_t n = v.size();
    while (j + 16 <= n) {
        const std::size_t stop = std::min(n, j + kBlock);
        __m256i sum = _mm256_setzero_si256(), sq = _mm256_setzero_si256();
        for (; j + 16 <= stop; j += 16) {
            const __m128i raw = _mm_loadu_si128(reinterpret_cast<const __m128i*>(v.data() + j));
            const __m256i w = _mm256_cvtepi8_epi16(raw);
            sum = _mm256_add_epi32(sum, _mm256_madd_epi16(w, ones));
            sq = _mm256_add_epi32(sq, _mm256_madd_epi16(w, w));
        }
        m.sum += hsum_epi32(sum);
        m.sum_sq += hsum_epi32(sq);
    }
    for (; j < n; ++j) {
        m.sum += v[j];
        m.sum_sq += static_cast<std::int64_t>(v[j]) * v[j];
    }
    return m;
}

IntMoments moments_i32(std::span<const std::int32_t> v) {
    __m256i sum = _mm256_setzero_si256(), sq = _mm256_setzero_si256();
    std::size_t j = 0;
    const std::size_t n = v.size();
    for (; j + 4 <= n; j += 4) {
        const __m128i raw = _mm_loadu_si128(reinterpret_cast<const __m128i*>(v.data() + j));
        const __m256i w = _mm256_cvtepi32_epi64(raw);
        sum = _mm256_add_epi64(sum, w);
        sq = _mm256_add_epi64(sq, _mm256_mul_epi32(w, w));
    }
    IntMoments m{hsum_epi64(sum), hsum_epi64(sq)};
    for (; j < n; ++j) {
        m.sum += v[j];
        m.sum_sq += static_cast<std::int64_t>(v[j]) * v[j];
    }
    return m;
}

void accumulate_i8(std::span<const std::int8_t> src, std::span<std::int32_t> dst) {
    std::size_t j = 0;
    const std::size_t n = src.size();
    for (; j + 8 <= n; j += 8) {
        const __m128i raw = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(src.data() + j));
        auto* out = reinterpret_cast<__m256i*>(dst.data() + j);
        _mm256_storeu_si256(out, _mm256_add_epi32(_mm256_loadu_si256(out), _mm256_cvtepi8_epi32(raw)));
    }
    for (; j < n; ++j) dst[j] += src[j];
}

}  // namespace

namespace detail {

const KernelTable& avx2_table_unchecked() {
    static const KernelTable table{Isa::avx2, evaluate_years, classify_row, moments_i8,
                                   moments_i32, accumulate_i8};
    return table;
}

}  // namespace detail

}  // namespace basisrisk::kernels
