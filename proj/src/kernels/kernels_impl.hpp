#pragma once

#include "enthier/kernels.hpp"

namespace enthier::kernels::detail {

extern const KernelTable kScalarTable;
#if defined(ENTHIER_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

}  // namespace enthier::kernels::detail
