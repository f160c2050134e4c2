#pragma once

// Survey-style microdata: one observed value per record, an auxiliary group
// key and a population tag. Group-level weight tables turn the group key into
// the record's mixing-weight row.

#include "mixtest/classic.hpp"
#include "mixtest/simulation.hpp"
#include "mixtest/weights.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mixtest {

struct MicrodataRecord {
  double value = 0.0;
  std::string group;
  std::string population;
  std::optional<Component> true_label;

  friend bool operator==(const MicrodataRecord&, const MicrodataRecord&) = default;
};

// Column names. The label column is optional in the file.
struct MicrodataSchema {
  std::string value = "value";
  std::string group = "group";
  std::string population = "population";
  std::string label = "label";
};

std::vector<MicrodataRecord> parse_microdata(std::istream& in,
                                             const MicrodataSchema& schema = {});
std::vector<MicrodataRecord> load_microdata(const std::string& path,
                                            const MicrodataSchema& schema = {});
void write_microdata_csv(std::ostream& out, const std::vector<MicrodataRecord>& records);

// (population, group) -> (w1, w2). Populations keep their insertion order.
class GroupWeightTable {
public:
  void add(const std::string& population, const std::string& group, double w1,
           double w2);
  // Throws LookupError naming the key when absent.
  std::pair<double, double> lookup(const std::string& population,
                                   const std::string& group) const;
  const std::vector<std::string>& populations() const noexcept { return populations_; }
  const std::map<std::pair<std::string, std::string>, std::pair<double, double>>&
  entries() const noexcept {
    return entries_;
  }

private:
  std::map<std::pair<std::string, std::string>, std::pair<double, double>> entries_;
  std::vector<std::string> populations_;
};

// CSV with columns population, group, w1, w2.
GroupWeightTable parse_weight_table(std::istream& in);
GroupWeightTable load_weight_table(const std::string& path);
void write_weight_table_csv(std::ostream& out, const GroupWeightTable& table);

struct PopulationSamples {
  std::string first_name;
  std::string second_name;
  MixtureSample first;
  MixtureSample second;
  // Present only when every record of the population carries a label.
  std::optional<LabeledSample> first_labeled;
  std::optional<LabeledSample> second_labeled;
};

// Splits records by population (record order preserved) and attaches each
// record's weight row from the table. Without explicit names the populations
// are taken in order of first appearance; exactly two must occur.
PopulationSamples weights_from_groups(
    const std::vector<MicrodataRecord>& records, const GroupWeightTable& table,
    std::optional<std::pair<std::string, std::string>> order = std::nullopt);

// --- synthetic fixtures -----------------------------------------------------

struct SyntheticGroup {
  std::string population;
  std::string group;
  std::size_t count = 0;
  double w1 = 0.0;
  double w2 = 0.0;
};

struct SyntheticScenario {
  std::string name;
  std::vector<SyntheticGroup> groups;
  std::map<std::string, Components> components; // per population
};

// Travel-time style scenario with an age group key: two states, 500 records
// per (state, age group), group weights and component moments modelled on
// census-style aggregates.
SyntheticScenario age_scenario();

// Same shape with a gender key; no group gives component 2 a weight of at
// least one half, so the expert test on component 2 is not available.
SyntheticScenario gender_scenario();

std::optional<SyntheticScenario> scenario_by_name(const std::string& name);

// Each group is drawn from RandomStream::substream(seed, group_index, 0):
// label ~ Bernoulli(w1), value ~ N(m_label, sigma_label^2) of its population.
std::vector<MicrodataRecord> synthesize_microdata(const SyntheticScenario& scenario,
                                                  std::uint64_t seed);
GroupWeightTable scenario_weight_table(const SyntheticScenario& scenario);

// CSV population,group,count in order of first appearance.
void write_manifest_csv(std::ostream& out, const std::vector<MicrodataRecord>& records);

} // namespace mixtest
