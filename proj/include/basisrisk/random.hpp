// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace basisrisk {

/// Philox4x32-10 block function (Salmon et al., SC'11). Exposed for
/// known-answer tests.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

/// SplitMix64 finalizer, used for key derivation.
std::uint64_t mix64(std::uint64_t z);

/// Substream identifiers. Every stochastic unit of work draws from a
/// stream keyed by (seed, experiment, indices...), so results never depend
/// on scheduling and adding work units never perturbs existing ones.
enum class StreamDomain : std::uint64_t {
    portfolio = 1,
    diversification = 2,
    spatial = 3,
    severity = 4,
    bootstrap = 5,
    oracle_check = 6,
    user = 7,
};

/// Counter-based random stream. Block counter occupies the low 64 counter
/// bits; the derived substream id occupies the high 64 bits.
class Stream {
public:
    Stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);
    Stream(std::uint64_t seed, StreamDomain domain,
           std::initializer_list<std::uint64_t> indices = {});

    std::uint64_t next_u64();

    /// Uniform on [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    std::uint64_t blocks_consumed() const { return block_; }

private:
    void set_identity(std::uint64_t h);
    void refill();

    PhiloxKey key_{};
    std::uint64_t substream_ = 0;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
};

}  // namespace basisrisk
