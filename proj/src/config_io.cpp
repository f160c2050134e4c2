#include "mixtest/config_io.hpp"

#include "mixtest/error.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace mixtest {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("config key '" + key + "': cannot parse '" + text + "'");
  return v;
}

// Quote a CSV field if it contains a separator or a quote.
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

} // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string write_config(const ExperimentConfig& c) {
  std::ostringstream os;
  const auto design = [&](const char* suffix, const BlockDesign& d, const Components& p) {
    os << "n_" << suffix << '=' << d.n << '\n'
       << "alpha_" << suffix << '=' << format_double(d.alpha) << '\n'
       << "beta_" << suffix << '=' << format_double(d.beta) << '\n'
       << "m1_" << suffix << '=' << format_double(p.first.m) << '\n'
       << "sigma1_" << suffix << '=' << format_double(p.first.sigma) << '\n'
       << "m2_" << suffix << '=' << format_double(p.second.m) << '\n'
       << "sigma2_" << suffix << '=' << format_double(p.second.sigma) << '\n';
  };
  design("x", c.design_x, c.components_x);
  design("y", c.design_y, c.components_y);
  os << "component=" << static_cast<int>(c.tested_component) << '\n'
     << "level=" << format_double(c.level.value()) << '\n'
     << "repetitions=" << c.repetitions << '\n'
     << "seed=" << c.seed << '\n'
     << "tests=";
  for (std::size_t i = 0; i < c.tests.size(); ++i)
    os << (i ? "," : "") << to_string(c.tests[i]);
  os << '\n' << "table=" << c.table << '\n' << "cell=" << c.cell << '\n';
  return os.str();
}

ExperimentConfig parse_config(std::string_view text) {
  std::map<std::string, std::string, std::less<>> kv;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    ++line_no;
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    const std::string body = trim(line);
    if (body.empty())
      continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!kv.emplace(key, std::move(value)).second)
      throw ConfigError("config key '" + key + "' given twice");
  }

  const auto take = [&](const std::string& key) -> std::string {
    const auto it = kv.find(key);
    if (it == kv.end())
      throw ConfigError("config is missing key '" + key + "'");
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  const auto real = [&](const std::string& key) {
    return parse_number<double>(key, take(key));
  };

  ExperimentConfig c;
  const auto design = [&](const std::string& suffix, BlockDesign& d, Components& p) {
    d.n = parse_number<std::size_t>("n_" + suffix, take("n_" + suffix));
    d.alpha = real("alpha_" + suffix);
    d.beta = real("beta_" + suffix);
    p.first.m = real("m1_" + suffix);
    p.first.sigma = real("sigma1_" + suffix);
    p.second.m = real("m2_" + suffix);
    p.second.sigma = real("sigma2_" + suffix);
  };
  design("x", c.design_x, c.components_x);
  design("y", c.design_y, c.components_y);

  const int comp = parse_number<int>("component", take("component"));
  if (comp != 1 && comp != 2)
    throw ConfigError("config key 'component' must be 1 or 2");
  c.tested_component = static_cast<Component>(comp);
  try {
    c.level = Level(real("level"));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config key 'level': ") + e.what());
  }
  c.repetitions = parse_number<std::uint64_t>("repetitions", take("repetitions"));
  c.seed = parse_number<std::uint64_t>("seed", take("seed"));

  if (kv.count("tests")) {
    c.tests.clear();
    const std::string list = take("tests");
    std::size_t p = 0;
    while (p <= list.size()) {
      const auto comma = list.find(',', p);
      const std::string name = trim(std::string_view(list).substr(
          p, comma == std::string::npos ? std::string::npos : comma - p));
      const auto kind = parse_test_kind(name);
      if (!kind)
        throw ConfigError("config key 'tests': unknown test '" + name + "'");
      c.tests.push_back(*kind);
      if (comma == std::string::npos)
        break;
      p = comma + 1;
    }
  }
  if (kv.count("table"))
    c.table = take("table");
  if (kv.count("cell"))
    c.cell = take("cell");
  if (!kv.empty())
    throw ConfigError("config has unknown key '" + kv.begin()->first + "'");
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DataError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void write_report_csv(std::ostream& out, const ExperimentReport& report,
                      bool with_header) {
  if (with_header)
    out << report_csv_header << '\n';
  for (const auto& t : report.tallies)
    out << csv_field(report.table) << ',' << csv_field(report.cell) << ','
        << to_string(t.kind) << ',' << format_double(t.rejection_rate()) << ','
        << format_double(t.mc_standard_error()) << ',' << t.used << ','
        << report.seed << '\n';
}

} // namespace mixtest
