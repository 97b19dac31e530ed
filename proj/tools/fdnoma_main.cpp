// fdnoma: closed-form and simulated outage probabilities for FD/HD NOMA links.
//
//   fdnoma sweep --config <path> --out <csv> [--plot-data <path>] [--mc]
//                [--samples N] [--seed S] [--ktr N] [--strict]
//   fdnoma point --config <path> --scheme <s> --node <n> --pt <dB>
//
// Exit codes: 0 success, 1 configuration or usage error, 2 a row failed to
// converge while --strict was given.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fdnoma/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNotConverged = 2;

struct CommonOptions {
  std::string config;
  bool mc = false;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> ktr;
  bool strict = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "Scenario file")->required()->check(CLI::ExistingFile);
  cmd->add_flag("--mc", o.mc, "Also run the Monte Carlo oracle");
  cmd->add_option("--samples", o.samples, "Monte Carlo samples per point");
  cmd->add_option("--seed", o.seed, "Monte Carlo seed");
  cmd->add_option("--ktr", o.ktr, "Series truncation order");
  cmd->add_flag("--strict", o.strict, "Exit with status 2 if any row did not converge");
}

fdnoma::scenario::Scenario load(const CommonOptions& o) {
  auto sc = fdnoma::scenario::load_config(o.config);
  if (o.mc) sc.sweep.with_mc = true;
  if (o.samples) sc.sweep.mc.num_samples = *o.samples;
  if (o.seed) sc.sweep.mc.seed = *o.seed;
  if (o.ktr) sc.system.k_tr = *o.ktr;
  try {
    sc.sweep.validate();
  } catch (const std::exception& e) {
    throw fdnoma::scenario::ConfigError(std::string("invalid options: ") + e.what());
  }
  return sc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outage probabilities of FD-NOMA, HD-NOMA and HD-OMA UAV links"};
  app.require_subcommand(1);

  CommonOptions sweep_opts;
  std::string out_csv;
  std::string plot_path;
  auto* sweep = app.add_subcommand("sweep", "Sweep transmit power and write a CSV table");
  add_common(sweep, sweep_opts);
  sweep->add_option("--out", out_csv, "CSV output path")->required();
  sweep->add_option("--plot-data", plot_path, "Whitespace-separated series for plotting");

  CommonOptions point_opts;
  std::string scheme_name;
  std::string node_name;
  double pt_db = 0.0;
  auto* point = app.add_subcommand("point", "Evaluate a single (scheme, node, P_t) point");
  add_common(point, point_opts);
  point->add_option("--scheme", scheme_name, "fd_noma | hd_noma | hd_oma")->required();
  point->add_option("--node", node_name, "gs | uav2 | uav3")->required();
  point->add_option("--pt", pt_db, "Transmit power in dB (noise-normalized)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sweep) {
      const auto sc = load(sweep_opts);
      const auto table = fdnoma::scenario::run_sweep(sc.system, sc.sweep);
      fdnoma::scenario::emit_csv(table, out_csv);
      if (!plot_path.empty()) fdnoma::scenario::emit_plot_data(table, plot_path);
      for (const auto& row : table.rows) {
        if (row.error) {
          std::cerr << "warning: " << fdnoma::to_string(row.scheme) << ' '
                    << fdnoma::to_string(row.node) << " at " << row.pt_db << " dB failed: " << *row.error
                    << '\n';
        }
      }
      if (sweep_opts.strict && !table.all_converged()) return kExitNotConverged;
      return kExitOk;
    }

    const auto sc = load(point_opts);
    const auto scheme = fdnoma::parse_scheme(scheme_name);
    const auto node = fdnoma::parse_node(node_name);
    if (!scheme) throw fdnoma::scenario::ConfigError("unknown scheme '" + scheme_name + "'");
    if (!node) throw fdnoma::scenario::ConfigError("unknown node '" + node_name + "'");
    const auto mc = sc.sweep.with_mc ? std::optional(sc.sweep.mc) : std::nullopt;
    const auto row = fdnoma::scenario::evaluate_row(sc.system, *scheme, *node, pt_db, mc);
    if (row.error) {
      std::cerr << "error: " << *row.error << '\n';
      return kExitConfig;
    }
    std::cout << fdnoma::scenario::format_csv_row(row) << '\n';
    if (point_opts.strict && !row.converged) return kExitNotConverged;
    return kExitOk;
  } catch (const fdnoma::scenario::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
