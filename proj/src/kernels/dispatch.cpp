// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_internal.hpp"

namespace basisrisk::kernels {

std::string_view to_string(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) {
    if (name == "scalar") return Isa::scalar;
    if (name == "avx2") return Isa::avx2;
    return std::nullopt;
}

const KernelTable* avx2_table() {
#if defined(BASISRISK_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &detail::avx2_table_unchecked() : nullptr;
#else
    return nullptr;
#endif
}

namespace {

const KernelTable* best() {
    if (const KernelTable* t = avx2_table()) return t;
    return &scalar_table();
}

const KernelTable* initial() {
    const char* env = std::getenv("BASISRISK_KERNEL");
    if (env == nullptr || std::string_view(env) == "auto" || *env == '\0') return best();
    const auto isa = parse_isa(env);
    if (isa == Isa::scalar) return &scalar_table();
    if (isa == Isa::avx2 && avx2_table() != nullptr) return avx2_table();
    return best();
}

std::atomic<const KernelTable*>& slot() {
    static std::atomic<const KernelTable*> current{initial()};
    return current;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

void select(Isa isa) {
    const KernelTable* t = isa == Isa::scalar ? &scalar_table() : avx2_table();
    if (t == nullptr)
        throw std::invalid_argument("kernel: variant '" + std::string(to_string(isa)) +
                                    "' is not available on this machine");
    slot().store(t, std::memory_order_release);
}

void select_best() { slot().store(best(), std::memory_order_release); }

}  // namespace basisrisk::kernels
