#pragma once

// Flat key=value experiment configs and CSV experiment reports.
//
// Config keys (one per line, '#' starts a comment, blank lines ignored):
//   n_x alpha_x beta_x  m1_x sigma1_x m2_x sigma2_x
//   n_y alpha_y beta_y  m1_y sigma1_y m2_y sigma2_y
//   component (1|2)  level  repetitions  seed
//   tests (comma list of oracle, expert, mixing)
//   table, cell (optional report labels)
// Every key except table, cell and tests is required.
//
// Report CSV: header "table,cell,test,rate,se,reps,seed", one row per test.
// reps is the number of repetitions in which the test was computable.

#include "mixtest/simulation.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace mixtest {

std::string write_config(const ExperimentConfig& config);
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

inline constexpr std::string_view report_csv_header = "table,cell,test,rate,se,reps,seed";

void write_report_csv(std::ostream& out, const ExperimentReport& report,
                      bool with_header = true);

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

} // namespace mixtest
