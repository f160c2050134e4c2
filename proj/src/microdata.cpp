#include "mixtest/microdata.hpp"

#include "mixtest/config_io.hpp"
#include "mixtest/error.hpp"
#include "mixtest/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace mixtest {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Splits one CSV line; double quotes protect commas, "" is a literal quote.
std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? cur : trim(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur += c;
    }
  }
  fields.push_back(was_quoted ? cur : trim(cur));
  return fields;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos)
    return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + '"';
}

std::optional<double> parse_real(const std::string& text) {
  double v = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  if (b != e && *b == '+')
    ++b;
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (b == e || ec != std::errc() || ptr != e || !std::isfinite(v))
    return std::nullopt;
  return v;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows; // (line, fields)
};

CsvTable read_csv(std::istream& in, const char* what) {
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF"))
      line.erase(0, 3);
    if (trim(line).empty())
      continue;
    if (!have_header) {
      t.header = split_csv(line);
      have_header = true;
    } else {
      t.rows.emplace_back(line_no, split_csv(line));
    }
  }
  if (!have_header)
    throw EmptyInputError(std::string(what) + " is empty");
  if (t.rows.empty())
    throw EmptyInputError(std::string(what) + " has a header but no rows");
  return t;
}

std::optional<std::size_t> find_column(const CsvTable& t, const std::string& name) {
  const auto it = std::find(t.header.begin(), t.header.end(), name);
  if (it == t.header.end())
    return std::nullopt;
  return static_cast<std::size_t>(it - t.header.begin());
}

std::size_t require_column(const CsvTable& t, const std::string& name,
                           const char* what) {
  if (auto c = find_column(t, name))
    return *c;
  throw SchemaError(std::string(what) + " has no column '" + name + "'");
}

void throw_row_errors(const std::vector<std::pair<std::size_t, std::string>>& errors,
                      const char* what) {
  if (errors.empty())
    return;
  std::string msg = std::string(what) + ": " + std::to_string(errors.size()) +
                    " malformed row(s)";
  const std::size_t shown = std::min<std::size_t>(errors.size(), 20);
  for (std::size_t i = 0; i < shown; ++i)
    msg += "\n  line " + std::to_string(errors[i].first) + ": " + errors[i].second;
  if (shown < errors.size())
    msg += "\n  ...";
  throw RowError(errors.front().first, msg);
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DataError("cannot open '" + path + "'");
  return in;
}

} // namespace

// --- microdata --------------------------------------------------------------

std::vector<MicrodataRecord> parse_microdata(std::istream& in,
                                             const MicrodataSchema& schema) {
  const CsvTable t = read_csv(in, "microdata");
  const std::size_t cv = require_column(t, schema.value, "microdata");
  const std::size_t cg = require_column(t, schema.group, "microdata");
  const std::size_t cp = require_column(t, schema.population, "microdata");
  const auto cl = find_column(t, schema.label);

  std::vector<MicrodataRecord> out;
  out.reserve(t.rows.size());
  std::vector<std::pair<std::size_t, std::string>> errors;
  for (const auto& [line, f] : t.rows) {
    if (f.size() != t.header.size()) {
      errors.emplace_back(line, "expected " + std::to_string(t.header.size()) +
                                    " fields, found " + std::to_string(f.size()));
      continue;
    }
    MicrodataRecord r;
    const auto v = parse_real(f[cv]);
    if (!v) {
      errors.emplace_back(line, "value '" + f[cv] + "' is not a finite number");
      continue;
    }
    r.value = *v;
    r.group = f[cg];
    r.population = f[cp];
    if (r.group.empty() || r.population.empty()) {
      errors.emplace_back(line, "empty group or population");
      continue;
    }
    if (cl && !f[*cl].empty()) {
      if (f[*cl] == "1")
        r.true_label = Component::first;
      else if (f[*cl] == "2")
        r.true_label = Component::second;
      else {
        errors.emplace_back(line, "label '" + f[*cl] + "' is not 1 or 2");
        continue;
      }
    }
    out.push_back(std::move(r));
  }
  throw_row_errors(errors, "microdata");
  return out;
}

std::vector<MicrodataRecord> load_microdata(const std::string& path,
                                            const MicrodataSchema& schema) {
  auto in = open(path);
  return parse_microdata(in, schema);
}

void write_microdata_csv(std::ostream& out, const std::vector<MicrodataRecord>& records) {
  const bool labels = std::any_of(records.begin(), records.end(),
                                  [](const auto& r) { return r.true_label.has_value(); });
  out << "value,group,population" << (labels ? ",label" : "") << '\n';
  for (const auto& r : records) {
    out << format_double(r.value) << ',' << csv_field(r.group) << ','
        << csv_field(r.population);
    if (labels) {
      out << ',';
      if (r.true_label)
        out << static_cast<int>(*r.true_label);
    }
    out << '\n';
  }
}

// --- weight tables ----------------------------------------------------------

void GroupWeightTable::add(const std::string& population, const std::string& group,
                           double w1, double w2) {
  if (!(w1 >= 0.0 && w2 >= 0.0) || std::abs(w1 + w2 - 1.0) > row_sum_tolerance)
    throw DomainError("weights for (" + population + ", " + group +
                      ") are not a probability pair");
  if (!entries_.emplace(std::pair{population, group}, std::pair{w1, w2}).second)
    throw DataError("duplicate weight entry for (" + population + ", " + group + ")");
  if (std::find(populations_.begin(), populations_.end(), population) ==
      populations_.end())
    populations_.push_back(population);
}

std::pair<double, double> GroupWeightTable::lookup(const std::string& population,
                                                   const std::string& group) const {
  const auto it = entries_.find({population, group});
  if (it == entries_.end())
    throw LookupError(population + "/" + group,
                      "no weights for population '" + population + "', group '" +
                          group + "'");
  return it->second;
}

GroupWeightTable parse_weight_table(std::istream& in) {
  const CsvTable t = read_csv(in, "weight table");
  const std::size_t cp = require_column(t, "population", "weight table");
  const std::size_t cg = require_column(t, "group", "weight table");
  const std::size_t c1 = require_column(t, "w1", "weight table");
  const std::size_t c2 = require_column(t, "w2", "weight table");
  GroupWeightTable table;
  std::vector<std::pair<std::size_t, std::string>> errors;
  for (const auto& [line, f] : t.rows) {
    if (f.size() != t.header.size()) {
      errors.emplace_back(line, "wrong number of fields");
      continue;
    }
    const auto w1 = parse_real(f[c1]);
    const auto w2 = parse_real(f[c2]);
    if (!w1 || !w2) {
      errors.emplace_back(line, "weights are not numbers");
      continue;
    }
    try {
      table.add(f[cp], f[cg], *w1, *w2);
    } catch (const Error& e) {
      errors.emplace_back(line, e.what());
    }
  }
  throw_row_errors(errors, "weight table");
  return table;
}

GroupWeightTable load_weight_table(const std::string& path) {
  auto in = open(path);
  return parse_weight_table(in);
}

void write_weight_table_csv(std::ostream& out, const GroupWeightTable& table) {
  out << "population,group,w1,w2\n";
  for (const auto& pop : table.populations())
    for (const auto& [key, w] : table.entries())
      if (key.first == pop)
        out << csv_field(key.first) << ',' << csv_field(key.second) << ','
            << format_double(w.first) << ',' << format_double(w.second) << '\n';
}

// --- weight assignment ------------------------------------------------------

PopulationSamples weights_from_groups(
    const std::vector<MicrodataRecord>& records, const GroupWeightTable& table,
    std::optional<std::pair<std::string, std::string>> order) {
  if (!order) {
    std::vector<std::string> seen;
    for (const auto& r : records)
      if (std::find(seen.begin(), seen.end(), r.population) == seen.end())
        seen.push_back(r.population);
    if (seen.size() != 2)
      throw DataError("expected exactly two populations in the microdata, found " +
                      std::to_string(seen.size()));
    order = std::pair{seen[0], seen[1]};
  }
  if (order->first == order->second)
    throw DataError("the two populations must differ");

  struct Builder {
    std::vector<double> values, w1, w2;
    std::vector<std::uint8_t> labels;
    bool all_labeled = true;
  } b[2];

  for (const auto& r : records) {
    const int idx = r.population == order->first ? 0
                    : r.population == order->second ? 1
                                                    : -1;
    if (idx < 0)
      continue;
    const auto [a, c] = table.lookup(r.population, r.group);
    auto& s = b[idx];
    s.values.push_back(r.value);
    s.w1.push_back(a);
    s.w2.push_back(c);
    if (r.true_label)
      s.labels.push_back(static_cast<std::uint8_t>(*r.true_label));
    else
      s.all_labeled = false;
  }
  for (int i = 0; i < 2; ++i)
    if (b[i].values.size() < 2)
      throw DataError("population '" + (i == 0 ? order->first : order->second) +
                      "' has fewer than 2 records");

  const auto labeled = [](Builder& s) -> std::optional<LabeledSample> {
    if (!s.all_labeled)
      return std::nullopt;
    return LabeledSample(s.values, std::move(s.labels));
  };
  auto l0 = labeled(b[0]);
  auto l1 = labeled(b[1]);
  return PopulationSamples{
      order->first,
      order->second,
      MixtureSample(std::move(b[0].values),
                    WeightsMatrix(std::move(b[0].w1), std::move(b[0].w2))),
      MixtureSample(std::move(b[1].values),
                    WeightsMatrix(std::move(b[1].w1), std::move(b[1].w2))),
      std::move(l0),
      std::move(l1)};
}

// --- synthetic fixtures -----------------------------------------------------

SyntheticScenario age_scenario() {
  SyntheticScenario s;
  s.name = "age";
  s.groups = {{"NY", "over21", 500, 0.5193, 0.4807},
              {"NY", "under20", 500, 0.3465, 0.6535},
              {"CA", "over21", 500, 0.574, 0.426},
              {"CA", "under20", 500, 0.4277, 0.5723}};
  // component 1: bus/trolley bus, component 2: walk (minutes)
  s.components["NY"] = {{47.26, 28.79}, {12.25, 12.18}};
  s.components["CA"] = {{45.12, 28.84}, {11.23, 12.23}};
  return s;
}

SyntheticScenario gender_scenario() {
  SyntheticScenario s;
  s.name = "gender";
  s.groups = {{"NY", "men", 500, 0.558, 0.442},
              {"NY", "women", 500, 0.753, 0.247},
              {"IL", "men", 500, 0.508, 0.492},
              {"IL", "women", 500, 0.654, 0.346}};
  // component 1: bus/trolley bus, component 2: railroad (minutes)
  s.components["NY"] = {{47.3, 28.8}, {71.0, 30.0}};
  s.components["IL"] = {{41.8, 26.4}, {63.1, 25.7}};
  return s;
}

std::optional<SyntheticScenario> scenario_by_name(const std::string& name) {
  if (name == "age")
    return age_scenario();
  if (name == "gender")
    return gender_scenario();
  return std::nullopt;
}

std::vector<MicrodataRecord> synthesize_microdata(const SyntheticScenario& scenario,
                                                  std::uint64_t seed) {
  std::vector<MicrodataRecord> out;
  for (std::size_t g = 0; g < scenario.groups.size(); ++g) {
    const auto& grp = scenario.groups[g];
    const auto it = scenario.components.find(grp.population);
    if (it == scenario.components.end())
      throw ConfigError("scenario has no component parameters for population '" +
                        grp.population + "'");
    auto stream = RandomStream::substream(seed, g, 0);
    for (std::size_t i = 0; i < grp.count; ++i) {
      const bool first = stream.uniform() < grp.w1;
      const ComponentParams& p = first ? it->second.first : it->second.second;
      MicrodataRecord r;
      r.value = p.m + p.sigma * stream.normal();
      r.group = grp.group;
      r.population = grp.population;
      r.true_label = first ? Component::first : Component::second;
      out.push_back(std::move(r));
    }
  }
  return out;
}

GroupWeightTable scenario_weight_table(const SyntheticScenario& scenario) {
  GroupWeightTable t;
  for (const auto& g : scenario.groups)
    t.add(g.population, g.group, g.w1, g.w2);
  return t;
}

void write_manifest_csv(std::ostream& out, const std::vector<MicrodataRecord>& records) {
  std::vector<std::pair<std::pair<std::string, std::string>, std::size_t>> counts;
  for (const auto& r : records) {
    auto it = std::find_if(counts.begin(), counts.end(), [&](const auto& c) {
      return c.first.first == r.population && c.first.second == r.group;
    });
    if (it == counts.end())
      counts.push_back({{r.population, r.group}, 1});
    else
      ++it->second;
  }
  out << "population,group,count\n";
  for (const auto& [key, n] : counts)
    out << csv_field(key.first) << ',' << csv_field(key.second) << ',' << n << '\n';
}

} // namespace mixtest
