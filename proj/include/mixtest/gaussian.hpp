#pragma once

namespace mixtest {

// Type I error level r, strictly inside (0, 1).
class Level {
public:
  explicit Level(double r);
  double value() const noexcept { return r_; }

  friend bool operator==(const Level&, const Level&) = default;

private:
  double r_;
};

// Phi(x). Throws DomainError for non-finite x.
double std_normal_cdf(double x);

// 1 - Phi(x), computed without cancellation.
double std_normal_sf(double x);

// Inverse of Phi on (0, 1). Rational initial guess refined by Newton steps.
double std_normal_quantile(double p);

// q_r: the quantile of order 1 - r/2 of the standard normal.
double critical_value(Level level);

// 2 * (1 - Phi(t)) for t >= 0. Throws DomainError for negative or NaN t.
double two_sided_p_value(double t);

} // namespace mixtest
