#pragma once

// Inner-loop arithmetic shared by the tests. Every kernel has a scalar
// reference implementation; wider variants (AVX2 on x86-64) are picked at
// runtime and must agree with the reference up to summation-order rounding.
//
// The active table can be forced with the environment variable
// MIXTEST_KERNELS=scalar|avx2 or programmatically with select_kernels().

#include <span>
#include <string_view>
#include <vector>

namespace mixtest::kernels {

struct GramSums {
  double s11 = 0.0; // sum w1^2
  double s12 = 0.0; // sum w1*w2
  double s22 = 0.0; // sum w2^2
};

struct KernelTable {
  const char* name;

  GramSums (*gram)(std::span<const double> w1, std::span<const double> w2);

  // sum a[i]*x[i]
  double (*dot)(std::span<const double> a, std::span<const double> x);

  // out[i] = c1*w1[i] + c2*w2[i]
  void (*combine)(std::span<const double> w1, std::span<const double> w2,
                  double c1, double c2, std::span<double> out);

  // sum a[i]^2 * (x[i] - w1[i]*m1 - w2[i]*m2)^2
  double (*weighted_sq_residual)(std::span<const double> a,
                                 std::span<const double> x,
                                 std::span<const double> w1,
                                 std::span<const double> w2, double m1,
                                 double m2);

  // sum ind[i] * (x[i] - center)^2, with ind[i] in {0, 1}
  double (*masked_sq_dev)(std::span<const double> x,
                          std::span<const double> ind, double center);
};

const KernelTable& scalar_kernels() noexcept;

// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available_kernels();

// The table used by the library. Chosen once from CPU features (or the
// MIXTEST_KERNELS override) on first use.
const KernelTable& active() noexcept;

// Switch the active table by name. Returns false if the name is unknown or
// the variant is not supported here; the active table is then unchanged.
bool select_kernels(std::string_view name);

} // namespace mixtest::kernels
