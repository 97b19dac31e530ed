#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "fdnoma/scenario.hpp"

using namespace fdnoma;
using namespace fdnoma::scenario;

namespace {

const char* kMinimal = R"(
[geometry]
d_12 = 2
d_13 = 3
)";

std::string read_all(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

SweepSpec single_point(double pt) {
  SweepSpec s;
  s.pt_start_db = pt;
  s.pt_stop_db = pt;
  s.pt_step_db = 5.0;
  return s;
}

}  // namespace

TEST(Config, LoadsReferenceFile) {
  const auto sc = load_config(FDNOMA_REFERENCE_CONFIG);
  const auto ref = outage::reference_config();
  EXPECT_EQ(sc.system.r_oma, ref.r_oma);
  EXPECT_EQ(sc.system.a_gs2, ref.a_gs2);
  EXPECT_EQ(sc.system.k_tr, ref.k_tr);
  EXPECT_EQ(sc.system.geometry.d_12, 2.0);
  EXPECT_EQ(sc.system.geometry.d_13, 3.0);
  EXPECT_EQ(sc.system.fading.link_g2.m, 3.0);
  EXPECT_EQ(sc.system.fading.link_g3.m, 10.0);
  EXPECT_EQ(sc.sweep.grid().size(), 13u);
  EXPECT_EQ(sc.sweep.mc.seed, 2019u);
  EXPECT_EQ(sc.sweep.schemes.size(), 3u);
}

TEST(Config, MinimalUsesDefaults) {
  const auto sc = parse_config_string(kMinimal);
  EXPECT_EQ(sc.system.beta, 0.1);
  EXPECT_EQ(sc.system.epsilon, 0.1);
  EXPECT_FALSE(sc.sweep.with_mc);
}

TEST(Config, MissingInterUavDistance) {
  try {
    parse_config_string("[geometry]\nd_13 = 3\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("d_12"), std::string::npos) << e.what();
  }
}

TEST(Config, RejectsOutOfRangeValues) {
  EXPECT_THROW(parse_config_string(std::string(kMinimal) + "[system]\na_gs2 = 1.5\n"), ConfigError);
  EXPECT_THROW(parse_config_string(std::string(kMinimal) + "[sweep]\npt_step_db = 0\n"), ConfigError);
}

TEST(Config, UnknownKeyReportsLine) {
  try {
    parse_config_string("[geometry]\nd_12 = 2\nd_13 = 3\nd_99 = 4\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 4);
  }
}

TEST(Config, SyntaxErrors) {
  EXPECT_THROW(parse_config_string(std::string(kMinimal) + "[system]\nbeta = abc\n"), ConfigError);
  EXPECT_THROW(parse_config_string(std::string(kMinimal) + "[nowhere]\n"), ConfigError);
  EXPECT_THROW(parse_config_string(std::string(kMinimal) + "d_12 = 4\n"), ConfigError);
  EXPECT_THROW(parse_config_string(std::string(kMinimal) + "[sweep]\nschemes = fd, xx\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/file.cfg"), ConfigError);
}

TEST(Sweep, SinglePointHasNineRows) {
  const auto sc = parse_config_string(kMinimal);
  const auto table = run_sweep(sc.system, single_point(20.0));
  ASSERT_EQ(table.rows.size(), 9u);
  EXPECT_TRUE(table.all_converged());
  for (const auto& r : table.rows) {
    EXPECT_EQ(r.pt_db, 20.0);
    EXPECT_FALSE(r.error.has_value());
    EXPECT_NEAR(r.closed_form, outage::evaluate([&] {
                  auto c = sc.system;
                  c.p_t_db = 20.0;
                  return c;
                }(), r.scheme, r.node).probability, 0.0);
  }
  EXPECT_EQ(table.rows.front().scheme, Scheme::FdNoma);
  EXPECT_EQ(table.rows.back().scheme, Scheme::HdOma);
}

TEST(Sweep, FdFlattensBeyond40Db) {
  const auto sc = parse_config_string(kMinimal);
  SweepSpec spec;
  spec.pt_start_db = 40;
  spec.pt_stop_db = 60;
  spec.pt_step_db = 10;
  spec.schemes = {Scheme::FdNoma};
  const auto table = run_sweep(sc.system, spec);
  ASSERT_EQ(table.rows.size(), 9u);
  for (std::size_t i = 0; i < table.rows.size(); i += 3) {
    const double a = table.rows[i].closed_form;
    const double c = table.rows[i + 2].closed_form;
    EXPECT_LT(std::abs(a - c), 0.1 * a);
  }
}

TEST(Sweep, CapturesFailedRows) {
  auto cfg = outage::reference_config();
  cfg.epsilon = -1.0;
  const auto row = evaluate_row(cfg, Scheme::FdNoma, Node::Gs, 10.0, std::nullopt);
  ASSERT_TRUE(row.error.has_value());
  EXPECT_TRUE(std::isnan(row.closed_form));
  EXPECT_FALSE(row.converged);
}

TEST(Sweep, WithMonteCarloColumns) {
  montecarlo::McSettings mc;
  mc.num_samples = 20'000;
  const auto row = evaluate_row(outage::reference_config(), Scheme::HdOma, Node::Gs, 0.0, mc);
  ASSERT_TRUE(row.mc_probability.has_value());
  ASSERT_TRUE(row.mc_std_error.has_value());
  EXPECT_GT(*row.mc_probability, 0.5);
}

TEST(Csv, HeaderOnlyForEmptyTable) {
  std::ostringstream out;
  write_csv(SweepTable{}, out);
  EXPECT_EQ(out.str(), std::string(kCsvHeader) + "\n");
}

TEST(Csv, RowFormat) {
  SweepRow r;
  r.scheme = Scheme::HdNoma;
  r.node = Node::Uav2;
  r.pt_db = 15;
  r.closed_form = 0.125;
  EXPECT_EQ(format_csv_row(r), "HD_NOMA,UAV2,15,0.125,true,,");
  r.mc_probability = 0.25;
  r.mc_std_error = 0.0;
  r.converged = false;
  EXPECT_EQ(format_csv_row(r), "HD_NOMA,UAV2,15,0.125,false,0.25,0");
}

TEST(Csv, RoundTripAndLineEndings) {
  const auto sc = parse_config_string(kMinimal);
  const auto table = run_sweep(sc.system, single_point(10.0));
  std::ostringstream out;
  write_csv(table, out);
  EXPECT_EQ(count_lines(out.str()), 10);
  EXPECT_EQ(out.str().find('\r'), std::string::npos);

  std::istringstream in(out.str());
  const auto back = read_csv(in);
  ASSERT_EQ(back.rows.size(), table.rows.size());
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].scheme, table.rows[i].scheme);
    EXPECT_EQ(back.rows[i].node, table.rows[i].node);
    EXPECT_NEAR(back.rows[i].closed_form, table.rows[i].closed_form,
                1e-9 * table.rows[i].closed_form);
    EXPECT_EQ(back.rows[i].converged, table.rows[i].converged);
  }
}

TEST(PlotData, BlocksPerSeries) {
  const auto sc = parse_config_string(kMinimal);
  SweepSpec spec;
  spec.pt_stop_db = 10;
  const auto table = run_sweep(sc.system, spec);
  std::ostringstream a;
  std::ostringstream b;
  write_plot_data(table, a);
  write_plot_data(table, b);
  EXPECT_EQ(a.str(), b.str());

  int headers = 0;
  int data = 0;
  std::istringstream in(a.str());
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("# ", 0) == 0) {
      ++headers;
    } else if (!line.empty()) {
      ++data;
    }
  }
  EXPECT_EQ(headers, 9);
  EXPECT_EQ(data, 27);
  EXPECT_NE(a.str().find("\n\n\n# "), std::string::npos);
}

TEST(EndToEnd, SameSeedGivesIdenticalFiles) {
  auto sc = load_config(FDNOMA_REFERENCE_CONFIG);
  sc.sweep.pt_stop_db = 10;
  sc.sweep.with_mc = true;
  sc.sweep.mc.num_samples = 20'000;
  const auto dir = std::filesystem::temp_directory_path();
  const auto p1 = dir / "fdnoma_e2e_1.csv";
  const auto p2 = dir / "fdnoma_e2e_2.csv";
  emit_csv(run_sweep(sc.system, sc.sweep), p1);
  emit_csv(run_sweep(sc.system, sc.sweep), p2);
  const auto s1 = read_all(p1);
  EXPECT_FALSE(s1.empty());
  EXPECT_EQ(s1, read_all(p2));
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}
