#include "mixtest/classic.hpp"
#include "mixtest/cli.hpp"
#include "mixtest/config_io.hpp"
#include "mixtest/kernels.hpp"
#include "mixtest/microdata.hpp"
#include "mixtest/mixing.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mixtest;

namespace {

const std::string data_dir = MIXTEST_TEST_DATA_DIR;
const std::string fixture_dir = MIXTEST_FIXTURE_DIR;

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ','))
      f.push_back(cell);
    rows.push_back(f);
  }
  return rows;
}

} // namespace

TEST_SUITE("data-cli") {
  TEST_CASE("usage errors") {
    CHECK(run({}).code == cli::usage_error);
    CHECK(run({"frobnicate"}).code == cli::usage_error);
    CHECK(run({"simulate"}).code == cli::usage_error);
    CHECK(run({"simulate", "--table", "9", "--cell", "n=1"}).code == cli::usage_error);
    CHECK(run({"simulate", "--table", "3", "--cell", "n=500", "--level", "1.5"}).code ==
          cli::usage_error);
    CHECK(run({"diagnose"}).code == cli::usage_error);
    CHECK(run({"--kernels", "sse9", "kernels"}).code == cli::usage_error);
    CHECK(run({"--help"}).code == cli::ok);
  }

  TEST_CASE("diagnose") {
    const auto good = run({"diagnose", "--n", "200", "--alpha", "0.75"});
    REQUIRE(good.code == cli::ok);
    const auto rows = csv(good.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"design", "n", "min_eigenvalue", "lindeberg_1",
                                              "lindeberg_2", "gram_det"});
    CHECK(rows[1][0] == "block");
    CHECK(std::stod(rows[1][2]) == doctest::Approx(0.125));

    const auto singular = run({"diagnose", "--n", "10", "--alpha", "0.5"});
    CHECK(singular.code == cli::numerical_error);
    CHECK(singular.out.empty());
    CHECK(singular.err.find("singular") != std::string::npos);

    const auto data = run({"diagnose", "--data", fixture_dir + "/age_microdata.csv",
                           "--weights", fixture_dir + "/age_weights.csv"});
    CHECK(data.code == cli::ok);
    CHECK(csv(data.out).size() == 3);
  }

  TEST_CASE("diagnose rejects malformed weight rows as data errors") {
    const auto path = std::filesystem::temp_directory_path() / "mixtest_bad_rows.csv";
    std::ofstream(path) << "w1,w2\n0.7,0.7\n0.2,0.8\n";
    CHECK(run({"diagnose", "--rows", path.string()}).code == cli::data_error);
    std::filesystem::remove(path);
  }

  TEST_CASE("simulate writes the report CSV") {
    const auto r = run({"simulate", "--table", "3", "--cell", "n=500", "--reps", "200",
                        "--seed", "5", "--threads", "1"});
    REQUIRE(r.code == cli::ok);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(r.out.starts_with(std::string(report_csv_header) + "\n"));
    CHECK(rows[1][2] == "oracle");
    CHECK(rows[2][2] == "mixing");
    CHECK(rows[1][5] == "200");
    CHECK(rows[1][6] == "5");
    // Same seed, same numbers.
    CHECK(run({"simulate", "--table", "3", "--cell", "n=500", "--reps", "200", "--seed",
               "5", "--threads", "2"})
              .out == r.out);
  }

  TEST_CASE("simulate from a config file") {
    const auto path = std::filesystem::temp_directory_path() / "mixtest_cfg.txt";
    auto cfg = table_config(4, "alpha=0.8;dbar=0.3", 50, 9);
    std::ofstream(path) << write_config(cfg);
    const auto r = run({"simulate", "--config", path.string(), "--threads", "1"});
    CHECK(r.code == cli::ok);
    CHECK(csv(r.out).size() == 2);
    std::ofstream(path) << "n_x = 10\n";
    CHECK(run({"simulate", "--config", path.string()}).code == cli::usage_error);
    std::filesystem::remove(path);
    CHECK(run({"simulate", "--config", path.string()}).code == cli::data_error);
  }

  TEST_CASE("test subcommand matches direct library calls") {
    const auto r = run({"test", "--data", fixture_dir + "/age_microdata.csv", "--weights",
                        fixture_dir + "/age_weights.csv", "--level", "0.05"});
    REQUIRE(r.code == cli::ok);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 4);

    const auto s = weights_from_groups(load_microdata(fixture_dir + "/age_microdata.csv"),
                                       load_weight_table(fixture_dir + "/age_weights.csv"));
    const Level lv(0.05);
    const TestOutcome direct[] = {
        oracle_test(*s.first_labeled, *s.second_labeled, Component::first, lv),
        expert_test(s.first, s.second, Component::first, lv),
        mixing_test(s.first, s.second, Component::first, lv)};
    const char* names[] = {"oracle", "expert", "mixing"};
    for (int i = 0; i < 3; ++i) {
      const auto& row = rows[i + 1];
      CHECK(row[0] == names[i]);
      CHECK(row[2] == "NY");
      CHECK(row[3] == "CA");
      CHECK(std::stod(row[4]) == direct[i].statistic);
      CHECK(std::stod(row[5]) == direct[i].p_value);
      CHECK(row[6] == (direct[i].reject ? "rejected" : "not rejected"));
    }
  }

  TEST_CASE("expert test is reported as non-available") {
    const auto r = run({"test", "--data", fixture_dir + "/gender_microdata.csv",
                        "--weights", fixture_dir + "/gender_weights.csv", "--component",
                        "2", "--tests", "expert,mixing"});
    REQUIRE(r.code == cli::ok);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][0] == "expert");
    CHECK(rows[1][6] == "non-available");
    CHECK(rows[2][0] == "mixing");
    CHECK(rows[2][6] != "non-available");
  }

  TEST_CASE("test subcommand data errors") {
    CHECK(run({"test", "--data", data_dir + "/bad_value.csv", "--weights",
               data_dir + "/four_weights.csv"})
              .code == cli::data_error);
    CHECK(run({"test", "--data", data_dir + "/empty.csv", "--weights",
               data_dir + "/four_weights.csv"})
              .code == cli::data_error);
    CHECK(run({"test", "--data", data_dir + "/four_rows.csv", "--weights",
               fixture_dir + "/age_weights.csv"})
              .code == cli::data_error);
    // Oracle requested without labels.
    CHECK(run({"test", "--data", data_dir + "/bad_value.csv", "--weights",
               data_dir + "/four_weights.csv", "--tests", "oracle"})
              .code == cli::data_error);
    CHECK(run({"test", "--data", data_dir + "/four_rows.csv", "--weights",
               data_dir + "/four_weights.csv", "--component", "3"})
              .code == cli::usage_error);
    const auto ok = run({"test", "--data", data_dir + "/four_rows.csv", "--weights",
                         data_dir + "/four_weights.csv", "--tests", "mixing"});
    CHECK(ok.code == cli::ok);
  }

  TEST_CASE("kernel listing and selection") {
    const std::string saved = kernels::active().name;
    const auto r = run({"--kernels", "scalar", "kernels"});
    CHECK(r.code == cli::ok);
    CHECK(r.out.find("scalar (active)") != std::string::npos);
    kernels::select_kernels(saved);
  }
}
