#pragma once

#include "graphrank/simd/kernels.hpp"

namespace graphrank::simd::detail {

extern const KernelTable kScalarTable;

#if defined(GRAPHRANK_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

}  // namespace graphrank::simd::detail
