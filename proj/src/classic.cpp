#include "mixtest/classic.hpp"

#include "mixtest/error.hpp"
#include "mixtest/kernels.hpp"

#include <cmath>
#include <string>

namespace mixtest {

LabeledSample::LabeledSample(std::vector<double> values,
                             std::vector<std::uint8_t> labels)
    : values_(std::move(values)), labels_(std::move(labels)) {
  if (values_.size() != labels_.size())
    throw ContractError("labeled sample has " + std::to_string(values_.size()) +
                        " values but " + std::to_string(labels_.size()) +
                        " labels");
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] != 1 && labels_[i] != 2)
      throw DomainError("label at position " + std::to_string(i) +
                        " is not 1 or 2");
  for (double v : values_)
    if (!std::isfinite(v))
      throw DomainError("sample values must be finite");
}

std::vector<double> LabeledSample::indicator(Component l) const {
  const auto want = static_cast<std::uint8_t>(l);
  std::vector<double> ind(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i)
    ind[i] = labels_[i] == want ? 1.0 : 0.0;
  return ind;
}

SubgroupStats masked_stats(std::span<const double> values,
                           std::span<const double> indicator) {
  if (values.size() != indicator.size())
    throw ContractError("values and subgroup indicator differ in length");
  const auto& k = kernels::active();
  SubgroupStats s;
  double count = 0.0;
  for (double v : indicator)
    count += v;
  s.count = static_cast<std::size_t>(count);
  if (s.count == 0)
    return s;
  s.mean = k.dot(indicator, values) / count;
  s.variance = k.masked_sq_dev(values, indicator, s.mean) / count;
  return s;
}

SubgroupStats subgroup_stats(const LabeledSample& sample, Component l) {
  return masked_stats(sample.values(), sample.indicator(l));
}

TestOutcome welch_outcome(const SubgroupStats& x, const SubgroupStats& y,
                          Component l, Level level) {
  if (x.empty() || y.empty())
    throw NotAvailableError(
        "no observation assigned to component " +
        std::to_string(static_cast<int>(l)) + " in " +
        (x.empty() && y.empty() ? "either sample"
                                : (x.empty() ? "the first sample"
                                             : "the second sample")));
  const double v = x.variance / static_cast<double>(x.count) +
                   y.variance / static_cast<double>(y.count);
  return decide(x.mean - y.mean, v, l, level);
}

TestOutcome oracle_test(const LabeledSample& x, const LabeledSample& y,
                        Component l, Level level) {
  return welch_outcome(subgroup_stats(x, l), subgroup_stats(y, l), l, level);
}

std::vector<bool> expert_labels(const WeightsMatrix& weights, Component l) {
  const auto w = weights.col(l);
  std::vector<bool> mask(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    mask[i] = w[i] >= 0.5;
  return mask;
}

std::vector<double> expert_indicator(const WeightsMatrix& weights, Component l) {
  const auto w = weights.col(l);
  std::vector<double> ind(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    ind[i] = w[i] >= 0.5 ? 1.0 : 0.0;
  return ind;
}

TestOutcome expert_test(const MixtureSample& x, const MixtureSample& y,
                        Component l, Level level) {
  const auto sx = masked_stats(x.values(), expert_indicator(x.weights(), l));
  const auto sy = masked_stats(y.values(), expert_indicator(y.weights(), l));
  return welch_outcome(sx, sy, l, level);
}

} // namespace mixtest
