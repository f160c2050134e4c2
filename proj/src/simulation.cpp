#include "mixtest/simulation.hpp"

#include "mixtest/error.hpp"
#include "mixtest/mixing.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

namespace mixtest {

// --- designs ----------------------------------------------------------------

void BlockDesign::validate() const {
  if (n < 2 || n % 2 != 0)
    throw ConfigError("block design size must be even and >= 2, got " +
                      std::to_string(n));
  if (!(alpha >= 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 1.0))
    throw ConfigError("block design weights must lie in [0, 1]");
  if (std::abs(alpha + beta - 1.0) < 1e-12)
    throw ConfigError("block design with alpha + beta = 1 is not full rank");
}

WeightsMatrix BlockDesign::weights() const {
  validate();
  std::vector<double> w1(n), w2(n);
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < half; ++i) {
    w1[i] = alpha;
    w2[i] = 1.0 - alpha;
  }
  for (std::size_t i = half; i < n; ++i) {
    w1[i] = 1.0 - beta;
    w2[i] = beta;
  }
  return WeightsMatrix(std::move(w1), std::move(w2));
}

std::string_view to_string(TestKind kind) noexcept {
  switch (kind) {
  case TestKind::oracle:
    return "oracle";
  case TestKind::expert:
    return "expert";
  case TestKind::mixing:
    return "mixing";
  }
  return "?";
}

std::optional<TestKind> parse_test_kind(std::string_view name) noexcept {
  for (TestKind k : all_test_kinds)
    if (to_string(k) == name)
      return k;
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  design_x.validate();
  design_y.validate();
  for (const auto* c : {&components_x, &components_y})
    for (const auto* p : {&c->first, &c->second})
      if (!std::isfinite(p->m) || !(p->sigma > 0.0) || !std::isfinite(p->sigma))
        throw ConfigError("component parameters need a finite mean and sigma > 0");
  if (repetitions < 1)
    throw ConfigError("repetitions must be >= 1");
  if (tests.empty())
    throw ConfigError("no test selected");
}

// --- tallies ----------------------------------------------------------------

double TestTally::rejection_rate() const noexcept {
  return used == 0 ? 0.0 : static_cast<double>(rejections) / static_cast<double>(used);
}

double TestTally::mc_standard_error() const noexcept {
  if (used == 0)
    return 0.0;
  const double p = rejection_rate();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(used));
}

const TestTally& ExperimentReport::tally(TestKind kind) const {
  for (const auto& t : tallies)
    if (t.kind == kind)
      return t;
  throw ConfigError("test '" + std::string(to_string(kind)) +
                    "' was not part of the experiment");
}

// --- sampling ---------------------------------------------------------------

std::pair<MixtureSample, LabeledSample>
sample_mixture(const BlockDesign& design, const Components& components,
               RandomStream& stream) {
  WeightsMatrix weights = design.weights();
  const std::size_t n = design.n;
  std::vector<double> values(n);
  std::vector<std::uint8_t> labels(n);
  const auto w1 = weights.w1();
  for (std::size_t i = 0; i < n; ++i) {
    const bool first = stream.uniform() < w1[i];
    const ComponentParams& p = first ? components.first : components.second;
    labels[i] = first ? 1 : 2;
    values[i] = p.m + p.sigma * stream.normal();
  }
  LabeledSample labeled(values, std::move(labels));
  return {MixtureSample(std::move(values), std::move(weights)), std::move(labeled)};
}

double exact_observation_mean(double w1, const Components& c) noexcept {
  return w1 * c.first.m + (1.0 - w1) * c.second.m;
}

double exact_observation_variance(double w1, const Components& c) noexcept {
  const double w2 = 1.0 - w1;
  const double gap = c.first.m - c.second.m;
  return w1 * c.first.sigma * c.first.sigma + w2 * c.second.sigma * c.second.sigma +
         w1 * w2 * gap * gap;
}

// --- experiment -------------------------------------------------------------

namespace {

struct FixedDesign {
  WeightsMatrix weights;
  std::optional<InversionMatrix> inversion;
  std::vector<double> expert;
};

FixedDesign prepare(const BlockDesign& design, const ExperimentConfig& cfg) {
  FixedDesign d{design.weights(), std::nullopt, {}};
  const auto has = [&](TestKind k) {
    return std::find(cfg.tests.begin(), cfg.tests.end(), k) != cfg.tests.end();
  };
  if (has(TestKind::mixing))
    d.inversion = invert_weights(d.weights);
  if (has(TestKind::expert))
    d.expert = expert_indicator(d.weights, cfg.tested_component);
  return d;
}

struct Worker {
  std::vector<TestTally> tallies;
};

void run_range(const ExperimentConfig& cfg, const FixedDesign& dx,
               const FixedDesign& dy, std::uint64_t begin, std::uint64_t end,
               Worker& out, std::vector<double>* stats) {
  const Component l = cfg.tested_component;
  for (std::uint64_t rep = begin; rep < end; ++rep) {
    auto sx = RandomStream::substream(cfg.seed, rep, 0);
    auto sy = RandomStream::substream(cfg.seed, rep, 1);
    const auto [mx, lx] = sample_mixture(cfg.design_x, cfg.components_x, sx);
    const auto [my, ly] = sample_mixture(cfg.design_y, cfg.components_y, sy);

    for (std::size_t t = 0; t < cfg.tests.size(); ++t) {
      TestTally& tally = out.tallies[t];
      try {
        TestOutcome o;
        switch (cfg.tests[t]) {
        case TestKind::oracle:
          o = oracle_test(lx, ly, l, cfg.level);
          break;
        case TestKind::expert:
          o = welch_outcome(masked_stats(mx.values(), dx.expert),
                            masked_stats(my.values(), dy.expert), l, cfg.level);
          break;
        case TestKind::mixing:
          o = mixing_test(mx, *dx.inversion, my, *dy.inversion, l, cfg.level);
          if (stats)
            (*stats)[rep] = o.signed_statistic();
          break;
        }
        ++tally.used;
        if (o.reject)
          ++tally.rejections;
      } catch (const NotAvailableError&) {
        ++tally.not_available;
      } catch (const DegenerateVarianceError&) {
        ++tally.not_available;
      }
    }
  }
}

} // namespace

ExperimentReport run_experiment(const ExperimentConfig& config,
                                const RunOptions& options) {
  config.validate();
  const FixedDesign dx = prepare(config.design_x, config);
  const FixedDesign dy = prepare(config.design_y, config);

  ExperimentReport report;
  report.table = config.table;
  report.cell = config.cell;
  report.seed = config.seed;
  report.repetitions = config.repetitions;
  for (TestKind k : config.tests)
    report.tallies.push_back(TestTally{k});
  std::vector<double>* stats = nullptr;
  if (options.keep_mixing_statistics) {
    report.mixing_statistics.assign(config.repetitions,
                                    std::numeric_limits<double>::quiet_NaN());
    stats = &report.mixing_statistics;
  }

  unsigned threads = options.threads != 0 ? options.threads
                                          : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::uint64_t>(threads, config.repetitions));

  std::vector<Worker> workers(threads, Worker{report.tallies});
  const std::uint64_t chunk = config.repetitions / threads;
  const std::uint64_t extra = config.repetitions % threads;
  std::vector<std::jthread> pool;
  std::uint64_t begin = 0;
  for (unsigned w = 0; w < threads; ++w) {
    const std::uint64_t end = begin + chunk + (w < extra ? 1 : 0);
    if (w + 1 == threads) {
      run_range(config, dx, dy, begin, end, workers[w], stats);
    } else {
      pool.emplace_back([&, begin, end, w] {
        run_range(config, dx, dy, begin, end, workers[w], stats);
      });
    }
    begin = end;
  }
  pool.clear();

  for (const Worker& w : workers)
    for (std::size_t t = 0; t < report.tallies.size(); ++t) {
      report.tallies[t].rejections += w.tallies[t].rejections;
      report.tallies[t].not_available += w.tallies[t].not_available;
      report.tallies[t].used += w.tallies[t].used;
    }
  return report;
}

// --- table presets ----------------------------------------------------------

namespace {

using CellMap = std::map<std::string, double, std::less<>>;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

CellMap parse_cell(std::string_view cell) {
  CellMap out;
  std::size_t pos = 0;
  while (pos <= cell.size()) {
    const auto next = cell.find_first_of(",;", pos);
    const std::string item =
        trim(cell.substr(pos, next == std::string_view::npos ? std::string_view::npos
                                                             : next - pos));
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw ConfigError("cell item '" + item + "' is not key=value");
      const std::string key = trim(std::string_view(item).substr(0, eq));
      const std::string val = trim(std::string_view(item).substr(eq + 1));
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
      if (ec != std::errc() || ptr != val.data() + val.size())
        throw ConfigError("cell value '" + val + "' for key '" + key +
                          "' is not a number");
      if (!out.emplace(key, v).second)
        throw ConfigError("cell key '" + key + "' given twice");
    }
    if (next == std::string_view::npos)
      break;
    pos = next + 1;
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double take(const CellMap& m, const char* key, std::initializer_list<double> grid,
            int table) {
  const auto it = m.find(key);
  if (it == m.end())
    throw ConfigError("table " + std::to_string(table) + " cell needs '" + key + "'");
  for (double g : grid)
    if (std::abs(g - it->second) < 1e-9)
      return g;
  throw ConfigError("table " + std::to_string(table) + " has no cell with " + key +
                    "=" + fmt(it->second));
}

void require_keys(const CellMap& m, std::initializer_list<const char*> keys, int table) {
  for (const auto& [k, v] : m) {
    bool known = false;
    for (const char* want : keys)
      known = known || k == want;
    if (!known)
      throw ConfigError("table " + std::to_string(table) + " has no cell key '" + k + "'");
  }
}

constexpr std::initializer_list<double> t1_delta{0.5, 1, 2, 3};
constexpr std::initializer_list<double> t1_n{100, 200, 500, 1000, 2000};
constexpr std::initializer_list<double> t23_n{500, 1000, 2000, 3000, 4000, 5000, 6000};
constexpr std::initializer_list<double> t4_alpha{0.6, 0.65, 0.7, 0.75, 0.8,
                                                 0.85, 0.9, 0.95, 1};
constexpr std::initializer_list<double> t4_dbar{0.1, 0.2, 0.3, 0.4};
constexpr std::initializer_list<double> t5_n{100, 200, 500};
constexpr std::array<std::pair<double, double>, 3> t5_pairs{
    {{0.9, 0.6}, {0.8, 0.7}, {0.75, 0.75}}};

BlockDesign symmetric(std::size_t n, double a) { return {n, a, a}; }

} // namespace

ExperimentConfig table_config(int table_id, std::string_view cell,
                              std::uint64_t repetitions, std::uint64_t seed) {
  const CellMap m = parse_cell(cell);
  ExperimentConfig c;
  c.repetitions = repetitions;
  c.seed = seed;
  c.level = Level(0.05);
  c.tested_component = Component::first;
  c.table = std::to_string(table_id);

  switch (table_id) {
  case 1: {
    require_keys(m, {"delta", "n"}, 1);
    const double delta = take(m, "delta", t1_delta, 1);
    const auto n = static_cast<std::size_t>(take(m, "n", t1_n, 1));
    c.design_x = c.design_y = symmetric(n, 0.9);
    c.components_x = {{0.0, 1.0}, {1.0, 1.0}};
    c.components_y = {{0.0, 1.0}, {1.0 + delta, 1.0}};
    c.tests = {TestKind::expert, TestKind::mixing};
    c.cell = "delta=" + fmt(delta) + ";n=" + std::to_string(n);
    break;
  }
  case 2:
  case 3: {
    require_keys(m, {"n"}, table_id);
    const auto n = static_cast<std::size_t>(take(m, "n", t23_n, table_id));
    c.design_x = c.design_y = symmetric(n, 0.9);
    c.components_x = {{0.0, 1.0}, {1.0, 1.0}};
    c.components_y = {{0.1, 1.0}, {2.0, 1.0}};
    if (table_id == 2)
      c.tests = {TestKind::mixing, TestKind::expert};
    else
      c.tests = {TestKind::oracle, TestKind::mixing};
    c.cell = "n=" + std::to_string(n);
    break;
  }
  case 4: {
    require_keys(m, {"alpha", "dbar"}, 4);
    const double alpha = take(m, "alpha", t4_alpha, 4);
    const double dbar = take(m, "dbar", t4_dbar, 4);
    c.design_x = c.design_y = symmetric(1000, alpha);
    c.components_x = {{0.0, 1.0}, {1.0, 1.0}};
    c.components_y = {{dbar, 1.0}, {0.0, 1.0}};
    c.tests = {TestKind::mixing};
    c.cell = "alpha=" + fmt(alpha) + ";dbar=" + fmt(dbar);
    break;
  }
  case 5: {
    require_keys(m, {"alpha", "alpha_prime", "n"}, 5);
    const double a = take(m, "alpha", {0.9, 0.8, 0.75}, 5);
    const double ap = take(m, "alpha_prime", {0.6, 0.7, 0.75}, 5);
    if (std::none_of(t5_pairs.begin(), t5_pairs.end(),
                     [&](const auto& p) { return p.first == a && p.second == ap; }))
      throw ConfigError("table 5 has no row (alpha, alpha_prime) = (" + fmt(a) +
                        ", " + fmt(ap) + ")");
    const auto n = static_cast<std::size_t>(take(m, "n", t5_n, 5));
    c.design_x = symmetric(n, a);
    c.design_y = symmetric(n, ap);
    c.components_x = {{0.0, 1.0}, {1.0, 1.0}};
    c.components_y = {{0.5, 1.0}, {0.0, 1.0}};
    c.tests = {TestKind::mixing};
    c.cell = "alpha=" + fmt(a) + ";alpha_prime=" + fmt(ap) + ";n=" + std::to_string(n);
    break;
  }
  default:
    throw ConfigError("unknown table " + std::to_string(table_id) +
                      " (presets exist for tables 1 to 5)");
  }
  return c;
}

std::vector<std::string> table_cells(int table_id) {
  std::vector<std::string> out;
  switch (table_id) {
  case 1:
    for (double d : t1_delta)
      for (double n : t1_n)
        out.push_back("delta=" + fmt(d) + ";n=" + fmt(n));
    break;
  case 2:
  case 3:
    for (double n : t23_n)
      out.push_back("n=" + fmt(n));
    break;
  case 4:
    for (double d : t4_dbar)
      for (double a : t4_alpha)
        out.push_back("alpha=" + fmt(a) + ";dbar=" + fmt(d));
    break;
  case 5:
    for (const auto& [a, ap] : t5_pairs)
      for (double n : t5_n)
        out.push_back("alpha=" + fmt(a) + ";alpha_prime=" + fmt(ap) + ";n=" + fmt(n));
    break;
  default:
    throw ConfigError("unknown table " + std::to_string(table_id));
  }
  return out;
}

} // namespace mixtest
