// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <set>

#include "basisrisk/random.hpp"

using namespace basisrisk;

TEST_CASE("philox4x32-10 known answers") {
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) ==
          PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and substreams distinct") {
    Stream a(7, StreamDomain::portfolio, {0, 3});
    Stream b(7, StreamDomain::portfolio, {0, 3});
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    std::set<std::uint64_t> firsts;
    for (std::uint64_t i = 0; i < 256; ++i) {
        firsts.insert(Stream(7, StreamDomain::portfolio, {0, i}).next_u64());
        firsts.insert(Stream(7, StreamDomain::spatial, {i}).next_u64());
        firsts.insert(Stream(8, StreamDomain::portfolio, {0, i}).next_u64());
    }
    CHECK(firsts.size() == 768);
}

TEST_CASE("uniform draws lie in [0,1)") {
    Stream s(1, StreamDomain::user);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = s.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo >= 0.0);
    CHECK(hi < 1.0);
    CHECK(lo < 1e-3);
    CHECK(hi > 1.0 - 1e-3);
}
