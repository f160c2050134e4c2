#include "mixtest/kernels.hpp"

#include <cstddef>

namespace mixtest::kernels {
namespace {

GramSums gram(std::span<const double> w1, std::span<const double> w2) {
  GramSums g;
  for (std::size_t i = 0; i < w1.size(); ++i) {
    g.s11 += w1[i] * w1[i];
    g.s12 += w1[i] * w2[i];
    g.s22 += w2[i] * w2[i];
  }
  return g;
}

double dot(std::span<const double> a, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * x[i];
  return s;
}

void combine(std::span<const double> w1, std::span<const double> w2,
             double c1, double c2, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = c1 * w1[i] + c2 * w2[i];
}

double weighted_sq_residual(std::span<const double> a,
                            std::span<const double> x,
                            std::span<const double> w1,
                            std::span<const double> w2, double m1,
                            double m2) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = x[i] - w1[i] * m1 - w2[i] * m2;
    const double ar = a[i] * r;
    s += ar * ar;
  }
  return s;
}

double masked_sq_dev(std::span<const double> x, std::span<const double> ind,
                     double center) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - center;
    s += ind[i] * (d * d);
  }
  return s;
}

constexpr KernelTable table{"scalar", gram, dot, combine,
                            weighted_sq_residual, masked_sq_dev};

} // namespace

const KernelTable& scalar_kernels() noexcept { return table; }

} // namespace mixtest::kernels
