#include "mixtest/cli.hpp"

#include "mixtest/classic.hpp"
#include "mixtest/config_io.hpp"
#include "mixtest/error.hpp"
#include "mixtest/kernels.hpp"
#include "mixtest/microdata.hpp"
#include "mixtest/mixing.hpp"
#include "mixtest/simulation.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mixtest::cli {
namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t p = 0;
  while (p <= s.size()) {
    const auto c = s.find(',', p);
    std::string item = s.substr(p, c == std::string::npos ? std::string::npos : c - p);
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty())
      out.push_back(item);
    if (c == std::string::npos)
      break;
    p = c + 1;
  }
  return out;
}

std::vector<TestKind> parse_tests(const std::string& list) {
  std::vector<TestKind> out;
  for (const auto& name : split_list(list)) {
    const auto k = parse_test_kind(name);
    if (!k)
      throw ConfigError("unknown test '" + name + "' (expected oracle, expert or mixing)");
    if (std::find(out.begin(), out.end(), *k) == out.end())
      out.push_back(*k);
  }
  if (out.empty())
    throw ConfigError("no test selected");
  return out;
}

// --- test -------------------------------------------------------------------

struct TestArgs {
  std::string data;
  std::string weights;
  int component = 1;
  double level = 0.1;
  std::string tests;
  std::string first, second;
  MicrodataSchema schema;
};

int cmd_test(const TestArgs& a, std::ostream& sink) {
  const Component l = component_from_label(a.component);
  const Level level(a.level);
  const auto records = load_microdata(a.data, a.schema);
  const auto table = load_weight_table(a.weights);
  std::optional<std::pair<std::string, std::string>> order;
  if (!a.first.empty() || !a.second.empty()) {
    if (a.first.empty() || a.second.empty())
      throw ConfigError("--first and --second must be given together");
    order = std::pair{a.first, a.second};
  }
  const auto samples = weights_from_groups(records, table, order);
  const bool labeled = samples.first_labeled && samples.second_labeled;

  std::vector<TestKind> tests;
  if (a.tests.empty()) {
    if (labeled)
      tests.push_back(TestKind::oracle);
    tests.push_back(TestKind::expert);
    tests.push_back(TestKind::mixing);
  } else {
    tests = parse_tests(a.tests);
  }
  if (!labeled && std::find(tests.begin(), tests.end(), TestKind::oracle) != tests.end())
    throw DataError("the oracle test needs a label for every record");

  std::ostringstream out;
  out << "test,component,first,second,statistic,p_value,decision\n";
  for (TestKind k : tests) {
    out << to_string(k) << ',' << a.component << ',' << samples.first_name << ','
        << samples.second_name << ',';
    try {
      TestOutcome o;
      switch (k) {
      case TestKind::oracle:
        o = oracle_test(*samples.first_labeled, *samples.second_labeled, l, level);
        break;
      case TestKind::expert:
        o = expert_test(samples.first, samples.second, l, level);
        break;
      case TestKind::mixing:
        o = mixing_test(samples.first, samples.second, l, level);
        break;
      }
      out << format_double(o.statistic) << ',' << format_double(o.p_value) << ','
          << (o.reject ? "rejected" : "not rejected") << '\n';
    } catch (const NotAvailableError&) {
      out << "non-available,non-available,non-available\n";
    }
  }
  sink << out.str();
  return ok;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  int table = 0;
  std::string cell;
  bool all_cells = false;
  std::string config;
  std::uint64_t reps = desk_repetitions;
  bool full_reps = false;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  double level = 0.0; // 0: keep the preset / config value
  std::string tests;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const std::uint64_t reps = a.full_reps ? reference_repetitions : a.reps;
  std::vector<ExperimentConfig> configs;
  if (!a.config.empty()) {
    if (a.table != 0)
      throw ConfigError("--config and --table are mutually exclusive");
    configs.push_back(load_config(a.config));
  } else if (a.table != 0) {
    if (a.all_cells == !a.cell.empty())
      throw ConfigError("--table needs exactly one of --cell or --all-cells");
    const auto cells = a.all_cells ? table_cells(a.table) : std::vector{a.cell};
    for (const auto& c : cells)
      configs.push_back(table_config(a.table, c, reps, a.seed));
  } else {
    throw ConfigError("simulate needs --table or --config");
  }
  for (auto& c : configs) {
    if (a.level != 0.0)
      c.level = Level(a.level);
    if (!a.tests.empty())
      c.tests = parse_tests(a.tests);
  }

  bool header = true;
  for (const auto& c : configs) {
    RunOptions opts;
    opts.threads = a.threads;
    write_report_csv(out, run_experiment(c, opts), header);
    header = false;
    out.flush();
  }
  return ok;
}

// --- diagnose ---------------------------------------------------------------

struct DiagnoseArgs {
  std::size_t n = 0;
  double alpha = -1.0;
  double beta = -1.0;
  std::string rows;
  std::string data;
  std::string weights;
  MicrodataSchema schema;
};

WeightsMatrix read_rows(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DataError("cannot open '" + path + "'");
  std::vector<double> w1, w2;
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    if (header) {
      header = false;
      if (line.find("w1") != std::string::npos)
        continue;
    }
    const auto comma = line.find(',');
    try {
      if (comma == std::string::npos)
        throw std::invalid_argument("no comma");
      std::size_t used1 = 0, used2 = 0;
      const std::string s1 = line.substr(0, comma), s2 = line.substr(comma + 1);
      const double a = std::stod(s1, &used1);
      const double b = std::stod(s2, &used2);
      if (s1.find_first_not_of(" \t\r", used1) != std::string::npos ||
          s2.find_first_not_of(" \t\r", used2) != std::string::npos)
        throw std::invalid_argument("trailing text");
      w1.push_back(a);
      w2.push_back(b);
    } catch (const std::logic_error&) {
      throw RowError(line_no, "rows file line " + std::to_string(line_no) +
                                  ": expected 'w1,w2'");
    }
  }
  if (w1.empty())
    throw EmptyInputError("rows file '" + path + "' has no rows");
  try {
    return WeightsMatrix(std::move(w1), std::move(w2));
  } catch (const DomainError& e) {
    throw DataError("rows file '" + path + "': " + e.what());
  } catch (const ContractError& e) {
    throw DataError("rows file '" + path + "': " + e.what());
  }
}

std::string diagnose_one(const std::string& name, const WeightsMatrix& w) {
  const double lam = min_eigenvalue_diagnostic(w);
  const auto inv = invert_weights(w); // throws on singular designs
  std::ostringstream out;
  out << name << ',' << w.size() << ',' << format_double(lam) << ','
      << format_double(lindeberg_diagnostic(inv, Component::first)) << ','
      << format_double(lindeberg_diagnostic(inv, Component::second)) << ','
      << format_double(inv.source_determinant()) << '\n';
  return out.str();
}

int cmd_diagnose(const DiagnoseArgs& a, std::ostream& out) {
  std::vector<std::pair<std::string, WeightsMatrix>> designs;
  const int sources = (a.n != 0) + !a.rows.empty() + !a.data.empty();
  if (sources != 1)
    throw ConfigError("diagnose needs exactly one of --n/--alpha/--beta, --rows, "
                      "or --data/--weights");
  if (a.n != 0) {
    if (a.n < 2 || a.n % 2 != 0)
      throw ConfigError("--n must be even and >= 2");
    if (!(a.alpha >= 0.0 && a.alpha <= 1.0))
      throw ConfigError("--alpha in [0, 1] is required with --n");
    const double beta = a.beta < 0.0 ? a.alpha : a.beta;
    if (!(beta <= 1.0))
      throw ConfigError("--beta must lie in [0, 1]");
    std::vector<double> w1(a.n), w2(a.n);
    for (std::size_t i = 0; i < a.n; ++i) {
      const bool top = i < a.n / 2;
      w1[i] = top ? a.alpha : 1.0 - beta;
      w2[i] = top ? 1.0 - a.alpha : beta;
    }
    designs.emplace_back("block", WeightsMatrix(std::move(w1), std::move(w2)));
  } else if (!a.rows.empty()) {
    designs.emplace_back("rows", read_rows(a.rows));
  } else {
    if (a.weights.empty())
      throw ConfigError("--data needs --weights");
    auto s = weights_from_groups(load_microdata(a.data, a.schema),
                                 load_weight_table(a.weights));
    designs.emplace_back(s.first_name, s.first.weights());
    designs.emplace_back(s.second_name, s.second.weights());
  }
  std::string body;
  for (const auto& [name, w] : designs)
    body += diagnose_one(name, w);
  out << "design,n,min_eigenvalue,lindeberg_1,lindeberg_2,gram_det\n" << body;
  return ok;
}

// --- synth ------------------------------------------------------------------

int cmd_synth(const std::string& scenario, std::uint64_t seed, const std::string& dir,
              std::ostream& out) {
  const auto s = scenario_by_name(scenario);
  if (!s)
    throw ConfigError("unknown scenario '" + scenario + "' (expected age or gender)");
  const auto records = synthesize_microdata(*s, seed);
  std::filesystem::create_directories(dir);
  const auto base = std::filesystem::path(dir) / s->name;
  const auto write = [&](const std::string& suffix, auto&& fn) {
    const auto path = base.string() + suffix;
    std::ofstream f(path, std::ios::binary);
    if (!f)
      throw DataError("cannot write '" + path + "'");
    fn(f);
    out << path << '\n';
  };
  write("_microdata.csv", [&](std::ostream& f) { write_microdata_csv(f, records); });
  write("_weights.csv",
        [&](std::ostream& f) { write_weight_table_csv(f, scenario_weight_table(*s)); });
  write("_manifest.csv", [&](std::ostream& f) { write_manifest_csv(f, records); });
  return ok;
}

void add_schema_options(CLI::App* cmd, MicrodataSchema& schema) {
  cmd->add_option("--value-col", schema.value, "Value column name")->capture_default_str();
  cmd->add_option("--group-col", schema.group, "Group column name")->capture_default_str();
  cmd->add_option("--population-col", schema.population, "Population column name")
      ->capture_default_str();
  cmd->add_option("--label-col", schema.label, "Optional label column name")
      ->capture_default_str();
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-sample tests of component means in mixtures with known, "
               "varying mixing-weights"};
  app.name("mixtest");
  app.require_subcommand(1);
  std::string kernel_name;
  app.add_option("--kernels", kernel_name, "Force a kernel variant (scalar, avx2)");

  TestArgs ta;
  auto* test = app.add_subcommand("test", "Run the tests on microdata with group weights");
  test->add_option("--data", ta.data, "Microdata CSV")->required();
  test->add_option("--weights", ta.weights, "Group weight table CSV")->required();
  test->add_option("--component", ta.component, "Tested component (1 or 2)")
      ->capture_default_str();
  test->add_option("--level", ta.level, "Type I error level")->capture_default_str();
  test->add_option("--tests", ta.tests,
                   "Comma list of oracle, expert, mixing (default: all available)");
  test->add_option("--first", ta.first, "Name of the first population");
  test->add_option("--second", ta.second, "Name of the second population");
  add_schema_options(test, ta.schema);

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo rejection rates");
  sim->add_option("--table", sa.table, "Preset table (1-5)");
  sim->add_option("--cell", sa.cell, "Cell selector, e.g. n=2000 or delta=1;n=500");
  sim->add_flag("--all-cells", sa.all_cells, "Run every cell of --table");
  sim->add_option("--config", sa.config, "key=value experiment file");
  sim->add_option("--reps", sa.reps, "Repetitions")->capture_default_str();
  sim->add_flag("--full-reps", sa.full_reps, "Use 40000 repetitions");
  sim->add_option("--seed", sa.seed, "Master seed")->capture_default_str();
  sim->add_option("--threads", sa.threads, "Worker threads (0: all cores)");
  sim->add_option("--level", sa.level, "Override the level of the preset/config");
  sim->add_option("--tests", sa.tests, "Override the tests of the preset/config");

  DiagnoseArgs da;
  auto* diag = app.add_subcommand("diagnose", "Design diagnostics");
  diag->add_option("--n", da.n, "Block design size");
  diag->add_option("--alpha", da.alpha, "Block design alpha");
  diag->add_option("--beta", da.beta, "Block design beta (default alpha)");
  diag->add_option("--rows", da.rows, "CSV of weight rows w1,w2");
  diag->add_option("--data", da.data, "Microdata CSV");
  diag->add_option("--weights", da.weights, "Group weight table CSV");
  add_schema_options(diag, da.schema);

  std::string scenario = "age";
  std::uint64_t synth_seed = 2006;
  std::string out_dir = ".";
  auto* synth = app.add_subcommand("synth", "Write a synthetic microdata fixture");
  synth->add_option("--scenario", scenario, "age or gender")->capture_default_str();
  synth->add_option("--seed", synth_seed, "Seed")->capture_default_str();
  synth->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();

  auto* kern = app.add_subcommand("kernels", "List kernel variants");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage_error;
  }

  try {
    if (!kernel_name.empty() && !kernels::select_kernels(kernel_name))
      throw ConfigError("kernel variant '" + kernel_name + "' is not available");
    if (*test)
      return cmd_test(ta, out);
    if (*sim)
      return cmd_simulate(sa, out);
    if (*diag)
      return cmd_diagnose(da, out);
    if (*synth)
      return cmd_synth(scenario, synth_seed, out_dir, out);
    if (*kern) {
      for (const auto* t : kernels::available_kernels())
        out << t->name << (t == &kernels::active() ? " (active)" : "") << '\n';
      return ok;
    }
  } catch (const NumericalError& e) {
    err << "mixtest: " << e.what() << '\n';
    return numerical_error;
  } catch (const DataError& e) {
    err << "mixtest: " << e.what() << '\n';
    return data_error;
  } catch (const ConfigError& e) {
    err << "mixtest: " << e.what() << '\n';
    return usage_error;
  } catch (const DomainError& e) {
    err << "mixtest: " << e.what() << '\n';
    return usage_error;
  } catch (const Error& e) {
    err << "mixtest: " << e.what() << '\n';
    return data_error;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "mixtest: " << e.what() << '\n';
    return data_error;
  }
  return usage_error;
}

} // namespace mixtest::cli
