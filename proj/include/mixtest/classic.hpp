#pragma once

// Welch-style benchmarks with the Gaussian critical value: the oracle test
// on true labels and the expert test on majority-weight pseudo-labels.

#include "mixtest/outcome.hpp"
#include "mixtest/weights.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mixtest {

class LabeledSample {
public:
  LabeledSample(std::vector<double> values, std::vector<std::uint8_t> labels);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const std::uint8_t> labels() const noexcept { return labels_; }

  // 1.0 where the label equals l, else 0.0.
  std::vector<double> indicator(Component l) const;

private:
  std::vector<double> values_;
  std::vector<std::uint8_t> labels_;
};

// Count, mean and biased variance (denominator count) of a subgroup.
struct SubgroupStats {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;
  bool empty() const noexcept { return count == 0; }
};

SubgroupStats subgroup_stats(const LabeledSample& sample, Component l);

// Stats over values[i] with indicator[i] == 1.
SubgroupStats masked_stats(std::span<const double> values,
                           std::span<const double> indicator);

// |mean_x - mean_y| / sqrt(var_x/n_x + var_y/n_y). Throws NotAvailableError
// if either subgroup is empty.
TestOutcome welch_outcome(const SubgroupStats& x, const SubgroupStats& y,
                          Component l, Level level);

TestOutcome oracle_test(const LabeledSample& x, const LabeledSample& y,
                        Component l, Level level);

// mask[i] = w_l(i) >= 1/2. A row (1/2, 1/2) is selected for both labels.
std::vector<bool> expert_labels(const WeightsMatrix& weights, Component l);

// Same selection as 0/1 doubles, the form the kernels consume.
std::vector<double> expert_indicator(const WeightsMatrix& weights, Component l);

TestOutcome expert_test(const MixtureSample& x, const MixtureSample& y,
                        Component l, Level level);

} // namespace mixtest
