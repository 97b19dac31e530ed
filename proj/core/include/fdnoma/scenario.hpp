#pragma once

// Scenario files, transmit-power sweeps and their CSV / plot-data output.
//
// Scenario file format: one `key = value` per line under `[section]`
// headers; `#` starts a comment. Sections are `system`, `geometry`, `fading`
// and `sweep`. Unknown keys are rejected. Every key has a default except
// geometry.d_12 and geometry.d_13.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdnoma/montecarlo.hpp"
#include "fdnoma/outage.hpp"

namespace fdnoma::scenario {

/// Parse or validation failure. line() is 1-based, or 0 when the problem is
/// not tied to a particular line (e.g. a missing key).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct SweepSpec {
  double pt_start_db = 0.0;
  double pt_stop_db = 60.0;
  double pt_step_db = 5.0;
  std::vector<Scheme> schemes{std::begin(kAllSchemes), std::end(kAllSchemes)};
  std::vector<Node> nodes{std::begin(kAllNodes), std::end(kAllNodes)};
  bool with_mc = false;
  montecarlo::McSettings mc;

  void validate() const;
  std::vector<double> grid() const;
};

struct Scenario {
  outage::SystemConfig system;
  SweepSpec sweep;
};

Scenario parse_config(std::istream& in);
Scenario parse_config_string(const std::string& text);
/// Throws ConfigError when the file cannot be read, parsed or validated.
Scenario load_config(const std::filesystem::path& path);

struct SweepRow {
  Scheme scheme = Scheme::FdNoma;
  Node node = Node::Gs;
  double pt_db = 0.0;
  double closed_form = 0.0;
  bool converged = true;
  bool threshold_infinite = false;
  std::optional<double> mc_probability;
  std::optional<double> mc_std_error;
  std::optional<std::string> error;  // set when the row failed
};

struct SweepTable {
  std::vector<SweepRow> rows;  // sorted by (scheme, node, pt_db)

  bool all_converged() const;
};

/// Evaluates one (scheme, node, P_t) row; evaluator failures are captured in
/// SweepRow::error rather than thrown.
SweepRow evaluate_row(const outage::SystemConfig& cfg, Scheme scheme, Node node, double pt_db,
                      const std::optional<montecarlo::McSettings>& mc);

SweepTable run_sweep(const outage::SystemConfig& cfg, const SweepSpec& spec);

inline constexpr const char* kCsvHeader = "scheme,node,pt_db,outage_cf,converged,outage_mc,mc_se";

/// One CSV data line (no trailing newline).
std::string format_csv_row(const SweepRow& row);

void write_csv(const SweepTable& table, std::ostream& out);
void emit_csv(const SweepTable& table, const std::filesystem::path& path);

/// Parses text written by write_csv.
SweepTable read_csv(std::istream& in);

/// One block per (scheme, node) series: a `# SCHEME NODE` comment line
/// followed by `pt_db outage` lines; blocks are separated by two blank lines
/// so gnuplot can address them with `index`.
void write_plot_data(const SweepTable& table, std::ostream& out);
void emit_plot_data(const SweepTable& table, const std::filesystem::path& path);

}  // namespace fdnoma::scenario
