#pragma once

#include "mixtest/kernels.hpp"

namespace mixtest::kernels::detail {

#if defined(MIXTEST_HAVE_AVX2)
const KernelTable& avx2_kernels() noexcept;
#endif

} // namespace mixtest::kernels::detail
