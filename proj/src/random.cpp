// SPDX-License-Identifier: Apache-2.0
#include "basisrisk/random.hpp"

namespace basisrisk {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

namespace {

std::uint64_t absorb(std::uint64_t h, std::initializer_list<std::uint64_t> words) {
    for (std::uint64_t w : words) h = mix64(h ^ mix64(w));
    return h;
}

}  // namespace

Stream::Stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    set_identity(absorb(mix64(seed), path));
}

Stream::Stream(std::uint64_t seed, StreamDomain domain,
               std::initializer_list<std::uint64_t> indices) {
    const std::uint64_t h = absorb(mix64(seed), {static_cast<std::uint64_t>(domain)});
    set_identity(absorb(h, indices));
}

void Stream::set_identity(std::uint64_t h) {
    const std::uint64_t k = mix64(h ^ 0x6B65795F6B657931ull);
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    substream_ = mix64(h ^ 0x7375627374726561ull);
}

void Stream::refill() {
    const PhiloxCounter out = philox4x32_10(
        {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
         static_cast<std::uint32_t>(substream_), static_cast<std::uint32_t>(substream_ >> 32)},
        key_);
    ++block_;
    buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    buffered_ = 2;
}

std::uint64_t Stream::next_u64() {
    if (buffered_ == 0) refill();
    return buffer_[2 - buffered_--];
}

}  // namespace basisrisk
