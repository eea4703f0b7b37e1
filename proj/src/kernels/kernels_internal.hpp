// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "basisrisk/kernels.hpp"

namespace basisrisk::kernels::detail {

#if defined(BASISRISK_HAVE_AVX2)
// Defined in the AVX2 translation unit; only call after a CPU check.
const KernelTable& avx2_table_unchecked();
#endif

}  // namespace basisrisk::kernels::detail
