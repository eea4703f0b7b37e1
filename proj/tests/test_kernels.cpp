// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "basisrisk/kernels.hpp"
#include "basisrisk/model.hpp"
#include "basisrisk/random.hpp"

using namespace basisrisk;
using namespace basisrisk::kernels;

namespace {

struct Events {
    std::vector<double> cx, cy, radius, severity;
    EventColumns view() const { return {cx, cy, radius, severity}; }
};

Events random_events(Stream& s, std::size_t n, double rmax) {
    Events ev;
    for (std::size_t j = 0; j < n; ++j) {
        ev.cx.push_back(s.uniform());
        ev.cy.push_back(s.uniform());
        ev.radius.push_back(rmax * s.uniform());
        ev.severity.push_back(20.0 * s.uniform());
    }
    return ev;
}

const std::size_t kLengths[] = {0, 1, 3, 4, 5, 7, 8, 15, 16, 17, 33, 1000, 4095, 4096, 4097, 10001};

}  // namespace

TEST_CASE("scalar evaluate_years matches evaluate_year") {
    Stream s(9, StreamDomain::user, {20});
    const SimulationConfig cfg;
    for (int rep = 0; rep < 50; ++rep) {
        const Contract c = sample_contract(s, cfg);
        const Events ev = random_events(s, 257, 0.5);
        std::vector<std::int8_t> br(257);
        scalar_table().evaluate_years({c.exposure, c.station, c.threshold}, ev.view(), br);
        for (std::size_t j = 0; j < br.size(); ++j) {
            const HazardEvent e{{ev.cx[j], ev.cy[j]}, ev.radius[j], ev.severity[j]};
            REQUIRE(br[j] == evaluate_year(c, e).basis_risk);
        }
    }
}

TEST_CASE("boundary events are classified identically by every variant") {
    // Footprint edge exactly on the point, severity exactly on the threshold.
    const ContractGeometry g{{0.25, 0.5}, {0.75, 0.5}, 10.0};
    Events ev;
    const double cases[][4] = {
        {0.5, 0.5, 0.25, 10.0}, {0.0, 0.5, 0.25, 10.0}, {1.0, 0.5, 0.25, 10.0},
        {0.75, 0.5, 0.0, 10.0}, {0.25, 0.5, 0.0, 10.0}, {0.5, 0.5, 0.25, 9.999999999},
        {0.75, 0.5, 0.1, 20.0}, {0.25, 0.5, 0.1, 0.0},  {0.5, 0.5, 0.2499999, 15.0},
    };
    for (const auto& c : cases) {
        ev.cx.push_back(c[0]);
        ev.cy.push_back(c[1]);
        ev.radius.push_back(c[2]);
        ev.severity.push_back(c[3]);
    }
    std::vector<std::int8_t> ref(ev.cx.size());
    scalar_table().evaluate_years(g, ev.view(), ref);
    const std::vector<std::int8_t> expected{0, -1, 1, 1, -1, 0, 1, 0, 0};
    CHECK(ref == expected);
    if (const KernelTable* avx = avx2_table()) {
        std::vector<std::int8_t> got(ev.cx.size());
        avx->evaluate_years(g, ev.view(), got);
        CHECK(got == ref);
    }
}

TEST_CASE("AVX2 kernels are bit-identical to the scalar reference") {
    const KernelTable* avx = avx2_table();
    if (!avx) {
        MESSAGE("AVX2 variant unavailable on this host; equivalence not exercised");
        return;
    }
    const KernelTable& ref = scalar_table();
    Stream s(4, StreamDomain::user, {21});
    const SimulationConfig cfg;

    SUBCASE("evaluate_years") {
        for (std::size_t n : kLengths) {
            for (int rep = 0; rep < 4; ++rep) {
                Contract c = sample_contract(s, cfg);
                if (rep == 3) c.station = c.exposure;
                const Events ev = random_events(s, n, rep == 2 ? 1.5 : 0.5);
                std::vector<std::int8_t> a(n, 7), b(n, 7);
                ref.evaluate_years({c.exposure, c.station, c.threshold}, ev.view(), a);
                avx->evaluate_years({c.exposure, c.station, c.threshold}, ev.view(), b);
                REQUIRE(a == b);
            }
        }
    }

    SUBCASE("classify_row") {
        for (std::size_t g : {1, 2, 3, 5, 8, 13, 100, 101, 2000, 2003}) {
            for (int rep = 0; rep < 5; ++rep) {
                const Point e = sample_point(s), st = sample_point(s);
                const double r = rep == 0 ? 0.0 : 0.6 * s.uniform();
                const double h = 1.0 / static_cast<double>(g);
                CoverageCounts a, b;
                for (std::size_t j = 0; j < g; j += 1 + g / 17) {
                    const double y = (static_cast<double>(j) + 0.5) * h;
                    ref.classify_row(y, h, g, e, st, r, a);
                    avx->classify_row(y, h, g, e, st, r, b);
                }
                REQUIRE(a == b);
            }
        }
    }

    SUBCASE("integer reductions") {
        for (std::size_t n : kLengths) {
            std::vector<std::int8_t> v8(n);
            std::vector<std::int32_t> v32(n), acc_a(n), acc_b(n);
            for (std::size_t j = 0; j < n; ++j) {
                v8[j] = static_cast<std::int8_t>(static_cast<int>(3.0 * s.uniform()) - 1);
                v32[j] = static_cast<std::int32_t>(2000.0 * s.uniform()) - 1000;
                acc_a[j] = acc_b[j] = static_cast<std::int32_t>(100.0 * s.uniform()) - 50;
            }
            REQUIRE(ref.moments_i8(v8) == avx->moments_i8(v8));
            REQUIRE(ref.moments_i32(v32) == avx->moments_i32(v32));
            ref.accumulate_i8(v8, acc_a);
            avx->accumulate_i8(v8, acc_b);
            REQUIRE(acc_a == acc_b);
        }
    }

    SUBCASE("i8 moments at the extremes of the value range") {
        std::vector<std::int8_t> lo(70000, -128), hi(70001, 127);
        CHECK(ref.moments_i8(lo) == avx->moments_i8(lo));
        CHECK(ref.moments_i8(hi) == avx->moments_i8(hi));
        CHECK(ref.moments_i8(lo).sum_sq == 70000LL * 128 * 128);
    }

    SUBCASE("i32 moments with large magnitudes") {
        std::vector<std::int32_t> v(333);
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = (j % 2 ? 1 : -1) * 2000000000;
        CHECK(ref.moments_i32(v) == avx->moments_i32(v));
    }
}

TEST_CASE("kernel selection") {
    CHECK(parse_isa("scalar") == Isa::scalar);
    CHECK(parse_isa("avx2") == Isa::avx2);
    CHECK_FALSE(parse_isa("neon").has_value());
    CHECK(to_string(Isa::avx2) == "avx2");

    select(Isa::scalar);
    CHECK(active().isa == Isa::scalar);
    if (avx2_table()) {
        select(Isa::avx2);
        CHECK(active().isa == Isa::avx2);
    } else {
        CHECK_THROWS_AS(select(Isa::avx2), std::invalid_argument);
    }
    select_best();
    CHECK(active().isa == (avx2_table() ? Isa::avx2 : Isa::scalar));
}
