#include "mixtest/mixing.hpp"

#include "mixtest/error.hpp"
#include "mixtest/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace mixtest {
namespace {

void require_match(const MixtureSample& sample, const InversionMatrix& inv) {
  if (sample.size() != inv.size())
    throw ContractError("inversion matrix has " + std::to_string(inv.size()) +
                        " rows, sample has " + std::to_string(sample.size()));
}

} // namespace

SingularDesignError::SingularDesignError(double determinant, std::size_t n)
    : NumericalError([&] {
        std::ostringstream os;
        os << "singular mixing-weights design: det(tW W) = " << determinant
           << " with n = " << n;
        return os.str();
      }()),
      determinant_(determinant), n_(n) {}

TestOutcome decide(double difference, double variance, Component component,
                   Level level) {
  TestOutcome out;
  out.level = level;
  out.component = component;
  out.difference = difference;
  if (!(variance >= 0.0) || !std::isfinite(difference))
    throw DegenerateVarianceError("variance estimate is negative or not a number");
  if (variance == 0.0) {
    if (difference != 0.0)
      throw DegenerateVarianceError(
          "estimated variance is zero while the estimates differ");
    return out;
  }
  out.std_error = std::sqrt(variance);
  out.statistic = std::abs(difference) / out.std_error;
  out.p_value = two_sided_p_value(out.statistic);
  out.reject = out.statistic > critical_value(level);
  return out;
}

InversionMatrix::InversionMatrix(std::vector<double> a1, std::vector<double> a2,
                                 WeightsMatrix::Gram gram)
    : a1_(std::move(a1)), a2_(std::move(a2)), gram_(gram) {
  if (a1_.size() != a2_.size())
    throw ContractError("inversion matrix columns differ in length");
}

InversionMatrix invert_weights(const WeightsMatrix& weights) {
  const std::size_t n = weights.size();
  const double nd = static_cast<double>(n);
  const auto g = weights.gram();
  const double det = g.det();
  if (!(det / (nd * nd) >= rank_tolerance))
    throw SingularDesignError(det, n);

  // Minors of G: gamma_11 = g22, gamma_12 = gamma_21 = g12, gamma_22 = g11.
  const double scale = nd / det;
  const auto& k = kernels::active();
  std::vector<double> a1(n), a2(n);
  k.combine(weights.w1(), weights.w2(), scale * g.g22, -scale * g.g12, a1);
  k.combine(weights.w1(), weights.w2(), -scale * g.g12, scale * g.g11, a2);
  return InversionMatrix(std::move(a1), std::move(a2), g);
}

ComponentMeanEstimates estimate_means(const MixtureSample& sample,
                                      const InversionMatrix& inv) {
  require_match(sample, inv);
  const auto& k = kernels::active();
  const double n = static_cast<double>(sample.size());
  return {k.dot(inv.col(Component::first), sample.values()) / n,
          k.dot(inv.col(Component::second), sample.values()) / n};
}

double estimate_variance_term(const MixtureSample& sample,
                              const InversionMatrix& inv,
                              const ComponentMeanEstimates& means,
                              Component l) {
  require_match(sample, inv);
  const double n = static_cast<double>(sample.size());
  const double s = kernels::active().weighted_sq_residual(
      inv.col(l), sample.values(), sample.weights().w1(), sample.weights().w2(),
      means.m1, means.m2);
  return s / (n * n);
}

TestOutcome mixing_test(const MixtureSample& x, const InversionMatrix& inv_x,
                        const MixtureSample& y, const InversionMatrix& inv_y,
                        Component l, Level level) {
  const auto mx = estimate_means(x, inv_x);
  const auto my = estimate_means(y, inv_y);
  const double v = estimate_variance_term(x, inv_x, mx, l) +
                   estimate_variance_term(y, inv_y, my, l);
  return decide(mx[l] - my[l], v, l, level);
}

TestOutcome mixing_test(const MixtureSample& x, const MixtureSample& y,
                        Component l, Level level) {
  return mixing_test(x, invert_weights(x.weights()), y,
                     invert_weights(y.weights()), l, level);
}

double lindeberg_diagnostic(const InversionMatrix& inv, Component l) {
  const auto a = inv.col(l);
  double peak = 0.0;
  double total = 0.0;
  for (double v : a) {
    peak = std::max(peak, v * v);
    total += v * v;
  }
  return total > 0.0 ? peak / total : 1.0;
}

double min_eigenvalue_diagnostic(const WeightsMatrix& weights) {
  const auto g = weights.gram();
  const double n = static_cast<double>(weights.size());
  const double p = g.g11 / n;
  const double q = g.g12 / n;
  const double s = g.g22 / n;
  const double half_trace = 0.5 * (p + s);
  const double radius = std::hypot(0.5 * (p - s), q);
  const double largest = half_trace + radius;
  if (largest <= 0.0)
    return 0.0;
  // det / largest avoids the cancellation in half_trace - radius.
  return std::max(0.0, (p * s - q * q) / largest);
}

} // namespace mixtest
