#pragma once

#include "mixtest/gaussian.hpp"
#include "mixtest/weights.hpp"

namespace mixtest {

// Result of one two-sample test on component l.
struct TestOutcome {
  double statistic = 0.0;  // |difference| / std_error, >= 0
  double difference = 0.0; // estimate(x) - estimate(y)
  double std_error = 0.0;  // sqrt of the estimated variance of difference
  double p_value = 1.0;
  bool reject = false;
  Level level{0.05};
  Component component = Component::first;

  // difference / std_error; 0 when both are 0.
  double signed_statistic() const noexcept {
    return std_error > 0.0 ? difference / std_error : 0.0;
  }
};

// Builds the outcome from a difference and its variance estimate, applying
// the Gaussian decision rule. A zero variance with a zero difference gives
// statistic 0; with a nonzero difference it throws DegenerateVarianceError.
TestOutcome decide(double difference, double variance, Component component,
                   Level level);

} // namespace mixtest
