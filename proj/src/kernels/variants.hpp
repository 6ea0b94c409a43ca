#pragma once

#include "hampath/kernels.hpp"

namespace hampath::kernels {

const KernelTable& scalar_table() noexcept;
#ifdef HAMPATH_HAVE_AVX2
const KernelTable& avx2_table() noexcept;
#endif

}  // namespace hampath::kernels
