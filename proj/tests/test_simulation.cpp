#include "mixtest/config_io.hpp"
#include "mixtest/error.hpp"
#include "mixtest/rng.hpp"
#include "mixtest/simulation.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

using namespace mixtest;

TEST_SUITE("rng") {
  TEST_CASE("streams are reproducible and distinct") {
    auto a = RandomStream::substream(7, 3, 0);
    auto b = RandomStream::substream(7, 3, 0);
    auto c = RandomStream::substream(7, 3, 1);
    auto d = RandomStream::substream(7, 4, 0);
    std::set<std::uint64_t> firsts;
    for (int i = 0; i < 100; ++i) {
      const auto va = a.next_u64();
      CHECK(va == b.next_u64());
      firsts.insert(va);
      firsts.insert(c.next_u64());
      firsts.insert(d.next_u64());
    }
    CHECK(firsts.size() == 300);
  }

  TEST_CASE("uniform and normal moments") {
    auto s = RandomStream::substream(1, 0, 0);
    const int n = 200000;
    double su = 0, sz = 0, sz2 = 0;
    for (int i = 0; i < n; ++i) {
      const double u = s.uniform();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      su += u;
      const double z = s.normal();
      sz += z;
      sz2 += z * z;
    }
    CHECK(std::abs(su / n - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
    CHECK(std::abs(sz / n) < 4 / std::sqrt(double(n)));
    CHECK(std::abs(sz2 / n - 1.0) < 4 * std::sqrt(2.0 / n));
  }
}

TEST_SUITE("sim-harness") {
  TEST_CASE("block design layout and validation") {
    const auto w = BlockDesign{6, 0.9, 0.7}.weights();
    CHECK(w.row(0) == std::pair{0.9, 1 - 0.9});
    CHECK(w.row(2) == std::pair{0.9, 1 - 0.9});
    CHECK(w.row(3) == std::pair{1 - 0.7, 0.7});
    CHECK_THROWS_AS((BlockDesign{5, 0.9, 0.9}.validate()), ConfigError);
    CHECK_THROWS_AS((BlockDesign{0, 0.9, 0.9}.validate()), ConfigError);
    CHECK_THROWS_AS((BlockDesign{4, 0.6, 0.4}.validate()), ConfigError);
    CHECK_THROWS_AS((BlockDesign{4, 1.2, 0.4}.validate()), ConfigError);
    CHECK_NOTHROW((BlockDesign{4, 1.0, 1.0}.validate()));
  }

  TEST_CASE("deterministic labels when weights are 0 or 1") {
    auto s = RandomStream::substream(5, 0, 0);
    const auto [mix, lab] = sample_mixture({10, 1.0, 1.0}, {{0, 1}, {5, 1}}, s);
    for (std::size_t i = 0; i < 10; ++i)
      CHECK(lab.labels()[i] == (i < 5 ? 1 : 2));
    CHECK(mix.values()[0] == lab.values()[0]);
  }

  TEST_CASE("label frequency follows the weights") {
    auto s = RandomStream::substream(11, 0, 0);
    const auto [mix, lab] = sample_mixture({10000, 0.9, 0.9}, {{0, 1}, {1, 1}}, s);
    std::size_t first_top = 0, first_bottom = 0;
    for (std::size_t i = 0; i < 5000; ++i) {
      first_top += lab.labels()[i] == 1;
      first_bottom += lab.labels()[5000 + i] == 1;
    }
    CHECK(std::abs(double(first_top) / 5000 - 0.9) < 0.01);
    CHECK(std::abs(double(first_bottom) / 5000 - 0.1) < 0.01);
  }

  TEST_CASE("table presets") {
    const auto c1 = table_config(1, "delta=1,n=2000", 100, 3);
    CHECK(c1.design_x.n == 2000);
    CHECK(c1.design_x.alpha == 0.9);
    CHECK(c1.components_y.second.m == 2.0);
    CHECK(c1.components_y.first.m == 0.0);
    CHECK(c1.cell == "delta=1;n=2000");
    CHECK(c1.tests == std::vector{TestKind::expert, TestKind::mixing});

    const auto c3 = table_config(3, "n=500", 100, 3);
    CHECK(c3.components_y.first.m == 0.1);
    CHECK(c3.components_y.second.m == 2.0);

    const auto c4 = table_config(4, "dbar=0.3;alpha=0.8", 100, 3);
    CHECK(c4.design_x.n == 1000);
    CHECK(c4.design_y.alpha == 0.8);
    CHECK(c4.components_y.first.m == 0.3);
    CHECK(c4.components_y.second.m == 0.0);

    const auto c5 = table_config(5, "alpha=0.9;alpha_prime=0.6;n=200", 100, 3);
    CHECK(c5.design_x.alpha == 0.9);
    CHECK(c5.design_y.alpha == 0.6);
    CHECK(c5.components_y.first.m == 0.5);

    CHECK_THROWS_AS(table_config(6, "n=500", 10, 0), ConfigError);
    CHECK_THROWS_AS(table_config(3, "n=501", 10, 0), ConfigError);
    CHECK_THROWS_AS(table_config(1, "n=500", 10, 0), ConfigError);
    CHECK_THROWS_AS(table_config(3, "n=500;bogus=1", 10, 0), ConfigError);
    CHECK_THROWS_AS(table_config(5, "alpha=0.9;alpha_prime=0.7;n=100", 10, 0), ConfigError);

    CHECK(table_cells(1).size() == 20);
    CHECK(table_cells(3).size() == 7);
    for (int t = 1; t <= 5; ++t)
      for (const auto& cell : table_cells(t))
        CHECK(table_config(t, cell, 1, 0).cell == cell);
  }

  TEST_CASE("report does not depend on the thread count") {
    auto cfg = table_config(3, "n=500", 300, 99);
    cfg.tests = {TestKind::oracle, TestKind::expert, TestKind::mixing};
    const auto one = run_experiment(cfg, {1, true});
    const auto three = run_experiment(cfg, {3, true});
    for (auto kind : cfg.tests) {
      CHECK(one.tally(kind).rejections == three.tally(kind).rejections);
      CHECK(one.tally(kind).used == three.tally(kind).used);
    }
    REQUIRE(one.mixing_statistics.size() == 300);
    for (std::size_t i = 0; i < 300; ++i)
      CHECK(one.mixing_statistics[i] == three.mixing_statistics[i]);
    const auto other_seed = run_experiment(table_config(3, "n=500", 300, 100), {1, true});
    CHECK(other_seed.mixing_statistics != one.mixing_statistics);
  }

  TEST_CASE("tallies and Monte Carlo standard error") {
    TestTally t{TestKind::mixing, 25, 3, 100};
    CHECK(t.rejection_rate() == 0.25);
    CHECK(t.mc_standard_error() == doctest::Approx(std::sqrt(0.25 * 0.75 / 100)));
    TestTally empty{};
    CHECK(empty.rejection_rate() == 0.0);
    CHECK(empty.mc_standard_error() == 0.0);
  }

  TEST_CASE("null rejection rate is close to the level") {
    ExperimentConfig cfg;
    cfg.design_x = cfg.design_y = {400, 0.8, 0.8};
    cfg.components_x = cfg.components_y = {{0, 1}, {1, 2}};
    cfg.level = Level(0.1);
    cfg.repetitions = 2000;
    cfg.seed = 2;
    const auto r = run_experiment(cfg, {1, false});
    for (auto kind : all_test_kinds) {
      const auto& t = r.tally(kind);
      CHECK(t.used == 2000);
      CHECK(std::abs(t.rejection_rate() - 0.1) < 4 * std::sqrt(0.09 / 2000));
    }
  }

  TEST_CASE("exact observation moments") {
    const Components c{{0, 1}, {3, 2}};
    CHECK(exact_observation_mean(0.25, c) == doctest::Approx(2.25));
    // w s1^2 + (1-w) s2^2 + w(1-w)(m1-m2)^2
    CHECK(exact_observation_variance(0.25, c) ==
          doctest::Approx(0.25 + 0.75 * 4 + 0.1875 * 9));
  }
}

TEST_SUITE("config-io") {
  TEST_CASE("config round trip") {
    auto cfg = table_config(5, "alpha=0.8;alpha_prime=0.7;n=500", 1234, 77);
    cfg.tested_component = Component::second;
    cfg.level = Level(0.1);
    const auto back = parse_config(write_config(cfg));
    CHECK(back.design_x.n == cfg.design_x.n);
    CHECK(back.design_y.alpha == cfg.design_y.alpha);
    CHECK(back.components_y.first.m == cfg.components_y.first.m);
    CHECK(back.components_x.second.sigma == cfg.components_x.second.sigma);
    CHECK(back.tested_component == Component::second);
    CHECK(back.level.value() == 0.1);
    CHECK(back.repetitions == 1234);
    CHECK(back.seed == 77);
    CHECK(back.tests == cfg.tests);
    CHECK(back.table == "5");
    CHECK(back.cell == cfg.cell);
    CHECK(write_config(back) == write_config(cfg));
  }

  TEST_CASE("config errors") {
    const std::string good = write_config(table_config(3, "n=500", 10, 1));
    CHECK_NOTHROW(parse_config(good));
    CHECK_THROWS_AS(parse_config(good + "seed = 4\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(good + "colour = red\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("n_x = 10\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(good + "tests = oracle,psychic\n"), ConfigError);
  }

  TEST_CASE("report CSV") {
    ExperimentReport r;
    r.table = "3";
    r.cell = "n=2000";
    r.seed = 42;
    r.repetitions = 10;
    r.tallies = {{TestKind::oracle, 6, 0, 10}, {TestKind::expert, 1, 2, 8}};
    std::ostringstream out;
    write_report_csv(out, r);
    CHECK(out.str() == "table,cell,test,rate,se,reps,seed\n"
                       "3,n=2000,oracle,0.6," +
                           format_double(std::sqrt(0.24 / 10)) +
                           ",10,42\n"
                           "3,n=2000,expert,0.125," +
                           format_double(std::sqrt(0.125 * 0.875 / 8)) + ",8,42\n");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-20) == "1e-20");
  }
}
