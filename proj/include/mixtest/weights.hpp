#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace mixtest {

// Label of a mixture component. The model has exactly two.
enum class Component : int { first = 1, second = 2 };

// Throws DomainError unless label is 1 or 2.
Component component_from_label(int label);

constexpr std::size_t column(Component c) noexcept {
  return static_cast<std::size_t>(c) - 1;
}

// Relative size below which det(tW W)/n^2 is treated as zero.
inline constexpr double rank_tolerance = 1e-10;

// Tolerance on |w1 + w2 - 1| for every row.
inline constexpr double row_sum_tolerance = 1e-12;

// Mixing-weights operator: n rows (w1(i), w2(i)) of label probabilities,
// stored column-wise. Rows are validated on construction; full rank is not
// required here (diagnostics must accept rank-deficient designs) and is
// checked by invert_weights().
class WeightsMatrix {
public:
  WeightsMatrix(std::vector<double> w1, std::vector<double> w2);

  static WeightsMatrix from_rows(std::span<const std::pair<double, double>> rows);

  std::size_t size() const noexcept { return w1_.size(); }
  std::span<const double> w1() const noexcept { return w1_; }
  std::span<const double> w2() const noexcept { return w2_; }
  std::span<const double> col(Component c) const noexcept {
    return c == Component::first ? std::span<const double>(w1_)
                                 : std::span<const double>(w2_);
  }
  std::pair<double, double> row(std::size_t i) const { return {w1_.at(i), w2_.at(i)}; }

  // Gram matrix tW W as (g11, g12, g22) and its determinant.
  struct Gram {
    double g11, g12, g22;
    double det() const noexcept { return g11 * g22 - g12 * g12; }
  };
  Gram gram() const;

  bool is_full_rank() const;

private:
  std::vector<double> w1_;
  std::vector<double> w2_;
};

// Observations with their known weight rows.
class MixtureSample {
public:
  MixtureSample(std::vector<double> values, WeightsMatrix weights);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  const WeightsMatrix& weights() const noexcept { return weights_; }

private:
  std::vector<double> values_;
  WeightsMatrix weights_;
};

} // namespace mixtest
