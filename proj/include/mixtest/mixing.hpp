#pragma once

// Moment-based testing of component means when every observation carries
// known, varying mixing-weights.

#include "mixtest/outcome.hpp"
#include "mixtest/weights.hpp"

#include <span>
#include <vector>

namespace mixtest {

// The n x 2 matrix A with tW A = n I. Column l turns a weighted sum of the
// observations into an unbiased estimator of the mean of component l.
class InversionMatrix {
public:
  InversionMatrix(std::vector<double> a1, std::vector<double> a2,
                  WeightsMatrix::Gram gram);

  std::size_t size() const noexcept { return a1_.size(); }
  std::span<const double> col(Component c) const noexcept {
    return c == Component::first ? std::span<const double>(a1_)
                                 : std::span<const double>(a2_);
  }
  const WeightsMatrix::Gram& source_gram() const noexcept { return gram_; }
  double source_determinant() const noexcept { return gram_.det(); }

private:
  std::vector<double> a1_;
  std::vector<double> a2_;
  WeightsMatrix::Gram gram_;
};

struct ComponentMeanEstimates {
  double m1 = 0.0;
  double m2 = 0.0;
  double operator[](Component c) const noexcept {
    return c == Component::first ? m1 : m2;
  }
};

// Cofactor solution a_l(i) = n/det(G) * sum_k (-1)^(l+k) minor_lk(G) w_k(i),
// G = tW W. Throws SingularDesignError when det(G)/n^2 < rank_tolerance.
InversionMatrix invert_weights(const WeightsMatrix& weights);

// m_l = (1/n) sum_i a_l(i) X_i for both components.
ComponentMeanEstimates estimate_means(const MixtureSample& sample,
                                      const InversionMatrix& inv);

// (1/n^2) sum_i a_l(i)^2 (X_i - w1(i) m1 - w2(i) m2)^2: one sample's share
// of the variance estimate of the mixing statistic.
double estimate_variance_term(const MixtureSample& sample,
                              const InversionMatrix& inv,
                              const ComponentMeanEstimates& means,
                              Component l);

// Mixing test of m_l(x) = m_l(y). Samples may differ in length; each is
// inverted against its own weights.
TestOutcome mixing_test(const MixtureSample& x, const MixtureSample& y,
                        Component l, Level level);

// Same, with precomputed inversions (the simulation harness reuses them
// across repetitions on a fixed design).
TestOutcome mixing_test(const MixtureSample& x, const InversionMatrix& inv_x,
                        const MixtureSample& y, const InversionMatrix& inv_y,
                        Component l, Level level);

// sup_i a_l(i)^2 / sum_i a_l(i)^2, in [1/n, 1]. Values near 0 mean no single
// observation dominates the estimator, which the normal limit relies on.
double lindeberg_diagnostic(const InversionMatrix& inv, Component l);

// Smallest eigenvalue of (1/n) tW W, closed form for 2x2 symmetric matrices.
double min_eigenvalue_diagnostic(const WeightsMatrix& weights);

} // namespace mixtest
