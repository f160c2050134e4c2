#pragma once

// Monte Carlo harness: Gaussian two-component mixtures on block designs,
// repeated application of the oracle, expert and mixing tests, and the
// scenario presets of the reference power tables (tables 1 to 5).

#include "mixtest/classic.hpp"
#include "mixtest/gaussian.hpp"
#include "mixtest/rng.hpp"
#include "mixtest/weights.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mixtest {

struct ComponentParams {
  double m = 0.0;
  double sigma = 1.0;
};

// Pair (component 1, component 2) of one population.
struct Components {
  ComponentParams first;
  ComponentParams second;
};

// n/2 rows (alpha, 1 - alpha) followed by n/2 rows (1 - beta, beta).
struct BlockDesign {
  std::size_t n = 0;
  double alpha = 0.0;
  double beta = 0.0;

  // Throws ConfigError unless n is even and >= 2, alpha and beta lie in
  // [0, 1] and alpha + beta != 1.
  void validate() const;
  WeightsMatrix weights() const;
};

enum class TestKind { oracle, expert, mixing };

inline constexpr std::array<TestKind, 3> all_test_kinds{
    TestKind::oracle, TestKind::expert, TestKind::mixing};

std::string_view to_string(TestKind kind) noexcept;
std::optional<TestKind> parse_test_kind(std::string_view name) noexcept;

inline constexpr std::uint64_t reference_repetitions = 40000;
inline constexpr std::uint64_t desk_repetitions = 10000;

struct ExperimentConfig {
  BlockDesign design_x;
  BlockDesign design_y;
  Components components_x;
  Components components_y;
  Component tested_component = Component::first;
  Level level{0.05};
  std::uint64_t repetitions = desk_repetitions;
  std::uint64_t seed = 0;
  std::vector<TestKind> tests{all_test_kinds.begin(), all_test_kinds.end()};

  // Report labels; not part of the model.
  std::string table = "custom";
  std::string cell = "-";

  void validate() const;
};

struct TestTally {
  TestKind kind = TestKind::mixing;
  std::uint64_t rejections = 0;
  std::uint64_t not_available = 0;
  std::uint64_t used = 0; // repetitions where the test could be computed

  double rejection_rate() const noexcept;
  // sqrt(p (1 - p) / used); 0 when used == 0.
  double mc_standard_error() const noexcept;
};

struct ExperimentReport {
  std::string table;
  std::string cell;
  std::uint64_t seed = 0;
  std::uint64_t repetitions = 0;
  std::vector<TestTally> tallies; // in config.tests order

  // Signed mixing statistics per repetition (NaN where unavailable), only
  // filled when requested through RunOptions.
  std::vector<double> mixing_statistics;

  const TestTally& tally(TestKind kind) const;
};

struct RunOptions {
  unsigned threads = 0; // 0: hardware concurrency
  bool keep_mixing_statistics = false;
};

// Latent labels ~ Bernoulli(w1(i)) per row, values ~ N(m_label, sigma_label^2).
// Returns the weight-only view and the labeled view of the same draw.
std::pair<MixtureSample, LabeledSample>
sample_mixture(const BlockDesign& design, const Components& components,
               RandomStream& stream);

// Repetitions are independent and use substreams (seed, repetition, 0) for X
// and (seed, repetition, 1) for Y, so the report does not depend on the
// thread count.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                const RunOptions& options = {});

// Preset for one cell of tables 1 to 5. cell is a list of key=value pairs
// separated by ',' or ';':
//   table 1: delta, n        table 2/3: n
//   table 4: alpha, dbar     table 5: alpha, alpha_prime, n
// Unknown tables, keys or grid values throw ConfigError.
ExperimentConfig table_config(int table_id, std::string_view cell,
                              std::uint64_t repetitions, std::uint64_t seed);

// Every cell of a table, row by row in the reference layout.
std::vector<std::string> table_cells(int table_id);

// Exact moments of one observation with first-component weight w1.
double exact_observation_mean(double w1, const Components& c) noexcept;
double exact_observation_variance(double w1, const Components& c) noexcept;

} // namespace mixtest
