// Compiled with -mavx2 -mfma. Only reached after a runtime CPU check.

#include "variants.hpp"

#include <immintrin.h>

#include <cstddef>

namespace mixtest::kernels::detail {
namespace {

// Fixed lane order so results are reproducible run to run.
inline double hsum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

GramSums gram(std::span<const double> w1, std::span<const double> w2) {
  const std::size_t n = w1.size();
  __m256d s11 = _mm256_setzero_pd();
  __m256d s12 = _mm256_setzero_pd();
  __m256d s22 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(w1.data() + i);
    const __m256d b = _mm256_loadu_pd(w2.data() + i);
    s11 = _mm256_fmadd_pd(a, a, s11);
    s12 = _mm256_fmadd_pd(a, b, s12);
    s22 = _mm256_fmadd_pd(b, b, s22);
  }
  GramSums g{hsum(s11), hsum(s12), hsum(s22)};
  for (; i < n; ++i) {
    g.s11 += w1[i] * w1[i];
    g.s12 += w1[i] * w2[i];
    g.s22 += w2[i] * w2[i];
  }
  return g;
}

double dot(std::span<const double> a, std::span<const double> x) {
  const std::size_t n = a.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i),
                           _mm256_loadu_pd(x.data() + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i + 4),
                           _mm256_loadu_pd(x.data() + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i),
                           _mm256_loadu_pd(x.data() + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i)
    s += a[i] * x[i];
  return s;
}

void combine(std::span<const double> w1, std::span<const double> w2,
             double c1, double c2, std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d k1 = _mm256_set1_pd(c1);
  const __m256d k2 = _mm256_set1_pd(c2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_mul_pd(k2, _mm256_loadu_pd(w2.data() + i));
    _mm256_storeu_pd(out.data() + i,
                     _mm256_fmadd_pd(k1, _mm256_loadu_pd(w1.data() + i), t));
  }
  for (; i < n; ++i)
    out[i] = c1 * w1[i] + c2 * w2[i];
}

double weighted_sq_residual(std::span<const double> a,
                            std::span<const double> x,
                            std::span<const double> w1,
                            std::span<const double> w2, double m1,
                            double m2) {
  const std::size_t n = a.size();
  const __m256d vm1 = _mm256_set1_pd(m1);
  const __m256d vm2 = _mm256_set1_pd(m2);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_loadu_pd(x.data() + i);
    r = _mm256_fnmadd_pd(_mm256_loadu_pd(w1.data() + i), vm1, r);
    r = _mm256_fnmadd_pd(_mm256_loadu_pd(w2.data() + i), vm2, r);
    const __m256d ar = _mm256_mul_pd(_mm256_loadu_pd(a.data() + i), r);
    acc = _mm256_fmadd_pd(ar, ar, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double r = x[i] - w1[i] * m1 - w2[i] * m2;
    const double ar = a[i] * r;
    s += ar * ar;
  }
  return s;
}

double masked_sq_dev(std::span<const double> x, std::span<const double> ind,
                     double center) {
  const std::size_t n = x.size();
  const __m256d c = _mm256_set1_pd(center);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), c);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(ind.data() + i),
                          _mm256_mul_pd(d, d), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - center;
    s += ind[i] * (d * d);
  }
  return s;
}

constexpr KernelTable table{"avx2", gram, dot, combine, weighted_sq_residual,
                            masked_sq_dev};

} // namespace

const KernelTable& avx2_kernels() noexcept { return table; }

} // namespace mixtest::kernels::detail
