#include "fdnoma/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "fdnoma/errors.hpp"

namespace fdnoma::scenario {

ConfigError::ConfigError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

void SweepSpec::validate() const {
  if (!(pt_step_db > 0.0)) throw DomainError("sweep: pt_step_db must be positive");
  if (!(pt_start_db <= pt_stop_db)) throw DomainError("sweep: requires pt_start_db <= pt_stop_db");
  if (schemes.empty()) throw DomainError("sweep: no schemes selected");
  if (nodes.empty()) throw DomainError("sweep: no nodes selected");
  if (with_mc) mc.validate();
}

std::vector<double> SweepSpec::grid() const {
  validate();
  std::vector<double> pts;
  const double tol = 1e-9 * pt_step_db;
  for (long i = 0;; ++i) {
    const double pt = pt_start_db + static_cast<double>(i) * pt_step_db;
    if (pt > pt_stop_db + tol) break;
    pts.push_back(pt);
  }
  return pts;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text, int line, const std::string& key) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("'" + key + "' expects a number, got '" + text + "'", line);
  }
  return v;
}

std::uint64_t parse_unsigned(const std::string& text, int line, const std::string& key) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("'" + key + "' expects a non-negative integer, got '" + text + "'", line);
  }
  return v;
}

bool parse_bool(const std::string& text, int line, const std::string& key) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("'" + key + "' expects true or false, got '" + text + "'", line);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

using Setter = std::function<void(Scenario&, const std::string&, int)>;

std::map<std::string, Setter> make_setters() {
  std::map<std::string, Setter> s;
  auto number = [&s](const std::string& key, auto member) {
    s[key] = [member, key](Scenario& sc, const std::string& v, int line) {
      member(sc) = parse_double(v, line, key);
    };
  };

  number("system.p_t_db", [](Scenario& sc) -> double& { return sc.system.p_t_db; });
  number("system.r_oma", [](Scenario& sc) -> double& { return sc.system.r_oma; });
  number("system.a_gs2", [](Scenario& sc) -> double& { return sc.system.a_gs2; });
  number("system.beta", [](Scenario& sc) -> double& { return sc.system.beta; });
  number("system.phase_noise_dbm", [](Scenario& sc) -> double& { return sc.system.phase_noise_dbm; });
  number("system.noise_dbm", [](Scenario& sc) -> double& { return sc.system.noise_dbm; });
  number("system.epsilon", [](Scenario& sc) -> double& { return sc.system.epsilon; });
  s["system.k_tr"] = [](Scenario& sc, const std::string& v, int line) {
    sc.system.k_tr = static_cast<unsigned>(parse_unsigned(v, line, "k_tr"));
  };

  number("geometry.d_1g", [](Scenario& sc) -> double& { return sc.system.geometry.d_1g; });
  number("geometry.d_g2", [](Scenario& sc) -> double& { return sc.system.geometry.d_g2; });
  number("geometry.d_g3", [](Scenario& sc) -> double& { return sc.system.geometry.d_g3; });
  number("geometry.d_12", [](Scenario& sc) -> double& { return sc.system.geometry.d_12; });
  number("geometry.d_13", [](Scenario& sc) -> double& { return sc.system.geometry.d_13; });
  number("geometry.pathloss_exp",
         [](Scenario& sc) -> double& { return sc.system.geometry.pathloss_exp; });

  using Link = channel::RicianShadowedParams outage::FadingSet::*;
  const std::pair<const char*, Link> links[] = {
      {"1g", &outage::FadingSet::link_1g}, {"si", &outage::FadingSet::si},
      {"g2", &outage::FadingSet::link_g2}, {"g3", &outage::FadingSet::link_g3},
      {"12", &outage::FadingSet::link_12}, {"13", &outage::FadingSet::link_13}};
  for (const auto& [name, link] : links) {
    const std::string k_key = std::string("fading.k_") + name;
    const std::string m_key = std::string("fading.m_") + name;
    s[k_key] = [link, k_key](Scenario& sc, const std::string& v, int line) {
      (sc.system.fading.*link).k_factor = parse_double(v, line, k_key);
    };
    s[m_key] = [link, m_key](Scenario& sc, const std::string& v, int line) {
      (sc.system.fading.*link).m = parse_double(v, line, m_key);
    };
  }

  number("sweep.pt_start_db", [](Scenario& sc) -> double& { return sc.sweep.pt_start_db; });
  number("sweep.pt_stop_db", [](Scenario& sc) -> double& { return sc.sweep.pt_stop_db; });
  number("sweep.pt_step_db", [](Scenario& sc) -> double& { return sc.sweep.pt_step_db; });
  s["sweep.mc"] = [](Scenario& sc, const std::string& v, int line) {
    sc.sweep.with_mc = parse_bool(v, line, "mc");
  };
  s["sweep.antithetic"] = [](Scenario& sc, const std::string& v, int line) {
    sc.sweep.mc.antithetic = parse_bool(v, line, "antithetic");
  };
  s["sweep.samples"] = [](Scenario& sc, const std::string& v, int line) {
    sc.sweep.mc.num_samples = parse_unsigned(v, line, "samples");
  };
  s["sweep.seed"] = [](Scenario& sc, const std::string& v, int line) {
    sc.sweep.mc.seed = parse_unsigned(v, line, "seed");
  };
  s["sweep.schemes"] = [](Scenario& sc, const std::string& v, int line) {
    sc.sweep.schemes.clear();
    for (const auto& item : split_list(v)) {
      const auto scheme = parse_scheme(item);
      if (!scheme) throw ConfigError("unknown scheme '" + item + "'", line);
      sc.sweep.schemes.push_back(*scheme);
    }
  };
  s["sweep.nodes"] = [](Scenario& sc, const std::string& v, int line) {
    sc.sweep.nodes.clear();
    for (const auto& item : split_list(v)) {
      const auto node = parse_node(item);
      if (!node) throw ConfigError("unknown node '" + item + "'", line);
      sc.sweep.nodes.push_back(*node);
    }
  };
  return s;
}

const std::set<std::string> kSections = {"system", "geometry", "fading", "sweep"};

template <class T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

Scenario parse_config(std::istream& in) {
  static const std::map<std::string, Setter> setters = make_setters();
  Scenario sc;
  std::set<std::string> seen;
  std::string section;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError("malformed section header", line);
      section = trim(text.substr(1, text.size() - 2));
      if (!kSections.count(section)) throw ConfigError("unknown section [" + section + "]", line);
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    if (section.empty()) throw ConfigError("key outside of any section", line);
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (value.empty()) throw ConfigError("missing value for '" + key + "'", line);
    const std::string full = section + "." + key;
    const auto it = setters.find(full);
    if (it == setters.end()) throw ConfigError("unknown key '" + key + "' in [" + section + "]", line);
    if (!seen.insert(full).second) throw ConfigError("duplicate key '" + key + "'", line);
    it->second(sc, value, line);
  }

  for (const char* required : {"geometry.d_12", "geometry.d_13"}) {
    if (!seen.count(required)) {
      throw ConfigError(std::string("missing mandatory key '") + required + "'");
    }
  }
  sort_unique(sc.sweep.schemes);
  sort_unique(sc.sweep.nodes);
  try {
    sc.system.validate();
    sc.sweep.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return sc;
}

Scenario parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

Scenario load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

bool SweepTable::all_converged() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const SweepRow& r) { return r.converged && !r.error; });
}

SweepRow evaluate_row(const outage::SystemConfig& cfg, Scheme scheme, Node node, double pt_db,
                      const std::optional<montecarlo::McSettings>& mc) {
  SweepRow row;
  row.scheme = scheme;
  row.node = node;
  row.pt_db = pt_db;
  outage::SystemConfig point = cfg;
  point.p_t_db = pt_db;
  try {
    const outage::OutageResult r = outage::evaluate(point, scheme, node);
    row.closed_form = r.probability;
    row.converged = r.converged;
    row.threshold_infinite = r.threshold_used.is_infinite();
    if (mc) {
      const montecarlo::McEstimate est = montecarlo::mc_outage(point, scheme, node, *mc);
      row.mc_probability = est.probability;
      row.mc_std_error = est.std_error;
    }
  } catch (const std::exception& e) {
    row.closed_form = std::numeric_limits<double>::quiet_NaN();
    row.converged = false;
    row.error = e.what();
  }
  return row;
}

SweepTable run_sweep(const outage::SystemConfig& cfg, const SweepSpec& spec) {
  cfg.validate();
  const std::vector<double> pts = spec.grid();
  std::vector<Scheme> schemes = spec.schemes;
  std::vector<Node> nodes = spec.nodes;
  sort_unique(schemes);
  sort_unique(nodes);
  const std::optional<montecarlo::McSettings> mc =
      spec.with_mc ? std::optional(spec.mc) : std::nullopt;

  SweepTable table;
  table.rows.reserve(schemes.size() * nodes.size() * pts.size());
  for (Scheme s : schemes) {
    for (Node n : nodes) {
      for (double pt : pts) table.rows.push_back(evaluate_row(cfg, s, n, pt, mc));
    }
  }
  return table;
}

namespace {

std::string fmt10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

std::string format_csv_row(const SweepRow& row) {
  std::string s;
  s += to_string(row.scheme);
  s += ',';
  s += to_string(row.node);
  s += ',';
  s += fmt10(row.pt_db);
  s += ',';
  s += fmt10(row.closed_form);
  s += ',';
  s += row.converged ? "true" : "false";
  s += ',';
  if (row.mc_probability) s += fmt10(*row.mc_probability);
  s += ',';
  if (row.mc_std_error) s += fmt10(*row.mc_std_error);
  return s;
}

void write_csv(const SweepTable& table, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& row : table.rows) out << format_csv_row(row) << '\n';
}

void emit_csv(const SweepTable& table, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  write_csv(table, out);
  if (!out.flush()) throw std::runtime_error("write failed for '" + path.string() + "'");
}

SweepTable read_csv(std::istream& in) {
  SweepTable table;
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("read_csv: missing or unexpected header");
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 7) {
      throw std::runtime_error("read_csv: line " + std::to_string(lineno) + " has " +
                               std::to_string(f.size()) + " fields");
    }
    SweepRow row;
    const auto scheme = parse_scheme(f[0]);
    const auto node = parse_node(f[1]);
    if (!scheme || !node) throw std::runtime_error("read_csv: bad scheme/node on line " + std::to_string(lineno));
    row.scheme = *scheme;
    row.node = *node;
    row.pt_db = std::stod(f[2]);
    row.closed_form = std::stod(f[3]);
    row.converged = f[4] == "true";
    if (!f[5].empty()) row.mc_probability = std::stod(f[5]);
    if (!f[6].empty()) row.mc_std_error = std::stod(f[6]);
    table.rows.push_back(row);
  }
  return table;
}

void write_plot_data(const SweepTable& table, std::ostream& out) {
  std::vector<const SweepRow*> rows;
  for (const auto& r : table.rows) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow* a, const SweepRow* b) {
    if (a->scheme != b->scheme) return a->scheme < b->scheme;
    if (a->node != b->node) return a->node < b->node;
    return a->pt_db < b->pt_db;
  });

  bool first = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& r = *rows[i];
    const bool new_block = i == 0 || r.scheme != rows[i - 1]->scheme || r.node != rows[i - 1]->node;
    if (new_block) {
      if (!first) out << "\n\n";
      first = false;
      out << "# " << to_string(r.scheme) << ' ' << to_string(r.node) << '\n';
    }
    out << fmt10(r.pt_db) << ' ' << fmt10(r.closed_form) << '\n';
  }
}

void emit_plot_data(const SweepTable& table, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  write_plot_data(table, out);
  if (!out.flush()) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace fdnoma::scenario
