#include "mixtest/gaussian.hpp"

#include "mixtest/error.hpp"

#include <cmath>
#include <string>

namespace mixtest {
namespace {

constexpr double inv_sqrt2 = 0.70710678118654752440;
constexpr double inv_sqrt_2pi = 0.39894228040143267794;

double density(double x) { return inv_sqrt_2pi * std::exp(-0.5 * x * x); }

// Acklam's rational approximation of the lower-tail quantile, relative
// error about 1e-9 on (0, 0.5].
double rational_guess(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Quantile for p in (0, 0.5]; Phi is evaluated through erfc so the lower
// tail keeps full relative precision during the Halley refinement.
double lower_quantile(double p) {
  double x = rational_guess(p);
  for (int step = 0; step < 3; ++step) {
    const double err = 0.5 * std::erfc(-x * inv_sqrt2) - p;
    const double u = err / density(x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

} // namespace

Level::Level(double r) : r_(r) {
  if (!(r > 0.0 && r < 1.0))
    throw DomainError("level must lie in (0, 1), got " + std::to_string(r));
}

double std_normal_cdf(double x) {
  if (!std::isfinite(x))
    throw DomainError("std_normal_cdf: non-finite argument");
  return 0.5 * std::erfc(-x * inv_sqrt2);
}

double std_normal_sf(double x) {
  if (!std::isfinite(x))
    throw DomainError("std_normal_sf: non-finite argument");
  return 0.5 * std::erfc(x * inv_sqrt2);
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("std_normal_quantile: probability must lie in (0, 1)");
  if (p <= 0.5)
    return lower_quantile(p);
  // 1 - p is exact for p in [0.5, 1).
  return -lower_quantile(1.0 - p);
}

double critical_value(Level level) {
  return -lower_quantile(0.5 * level.value());
}

double two_sided_p_value(double t) {
  if (std::isnan(t) || t < 0.0)
    throw DomainError("two_sided_p_value: statistic must be nonnegative");
  if (std::isinf(t))
    return 0.0;
  return std::erfc(t * inv_sqrt2);
}

} // namespace mixtest
