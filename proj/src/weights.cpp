#include "mixtest/weights.hpp"

#include "mixtest/error.hpp"
#include "mixtest/kernels.hpp"

#include <cmath>
#include <string>

namespace mixtest {

Component component_from_label(int label) {
  if (label == 1)
    return Component::first;
  if (label == 2)
    return Component::second;
  throw DomainError("component label must be 1 or 2, got " + std::to_string(label));
}

WeightsMatrix::WeightsMatrix(std::vector<double> w1, std::vector<double> w2)
    : w1_(std::move(w1)), w2_(std::move(w2)) {
  if (w1_.size() != w2_.size())
    throw ContractError("weight columns differ in length");
  if (w1_.size() < 2)
    throw ContractError("a weights matrix needs at least 2 rows");
  for (std::size_t i = 0; i < w1_.size(); ++i) {
    const double a = w1_[i];
    const double b = w2_[i];
    if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < 0.0 ||
        std::abs(a + b - 1.0) > row_sum_tolerance)
      throw DomainError("weight row " + std::to_string(i) +
                        " is not a probability pair");
  }
}

WeightsMatrix WeightsMatrix::from_rows(std::span<const std::pair<double, double>> rows) {
  std::vector<double> a, b;
  a.reserve(rows.size());
  b.reserve(rows.size());
  for (const auto& [x, y] : rows) {
    a.push_back(x);
    b.push_back(y);
  }
  return WeightsMatrix(std::move(a), std::move(b));
}

WeightsMatrix::Gram WeightsMatrix::gram() const {
  const auto s = kernels::active().gram(w1_, w2_);
  return {s.s11, s.s12, s.s22};
}

bool WeightsMatrix::is_full_rank() const {
  const double n = static_cast<double>(size());
  return gram().det() / (n * n) >= rank_tolerance;
}

MixtureSample::MixtureSample(std::vector<double> values, WeightsMatrix weights)
    : values_(std::move(values)), weights_(std::move(weights)) {
  if (values_.size() != weights_.size())
    throw ContractError("sample has " + std::to_string(values_.size()) +
                        " values but " + std::to_string(weights_.size()) +
                        " weight rows");
  for (double v : values_)
    if (!std::isfinite(v))
      throw DomainError("sample values must be finite");
}

} // namespace mixtest
