#pragma once

#include "netcascade/linalg/kernels.hpp"

namespace netcascade::kernels::detail {

const KernelTable& scalar_table();
#if defined(NETCASCADE_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(NETCASCADE_HAVE_NEON)
const KernelTable& neon_table();
#endif

}  // namespace netcascade::kernels::detail
