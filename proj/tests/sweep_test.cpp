#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "qpd/report.hpp"
#include "qpd/sweep.hpp"
#include "test_support.hpp"

namespace qpd {
namespace {

using testing::fig2_table;
using testing::fig3_table;
using testing::fig4_table;

constexpr double kPi = std::numbers::pi;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string csv_of(const SweepConfig& config) {
  std::ostringstream out;
  write_csv(run_sweep(config), out);
  return out.str();
}

SweepConfig config_for(const PayoffTable& table, Space space, int steps) {
  return SweepConfig{.table = table, .space = space, .steps = steps, .grid_n = std::nullopt};
}

TEST(Sweep, GoldenCsvSingleThreshold) {
  EXPECT_EQ(csv_of(config_for(fig3_table(), Space::kTwoParam, 5)),
            read_file(std::string(QPD_GOLDEN_DIR) + "/sweep_3250_steps5.csv"));
}

TEST(Sweep, SamplesBracketThresholds) {
  const auto config = config_for(fig2_table(), Space::kTwoParam, 10);
  const auto g = sweep_samples(config);
  EXPECT_EQ(g.size(), 14u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), kPi / 2);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_LT(g[i - 1], g[i]);
  const auto th = thresholds(fig2_table());
  for (double t : {th.gamma_th1, th.gamma_th2}) {
    EXPECT_NE(std::find(g.begin(), g.end(), t - kThresholdSampleOffset), g.end());
    EXPECT_NE(std::find(g.begin(), g.end(), t + kThresholdSampleOffset), g.end());
  }
}

TEST(Sweep, SamplesOutsideRangeAreDropped) {
  auto config = config_for(fig2_table(), Space::kTwoParam, 3);
  config.gamma_min = 0.0;
  config.gamma_max = 0.3;
  EXPECT_EQ(sweep_samples(config).size(), 3u);
}

TEST(Sweep, IsDeterministic) {
  const auto config = config_for(fig2_table(), Space::kFull, 40);
  EXPECT_EQ(csv_of(config), csv_of(config));
  std::ostringstream a, b;
  write_json(config, run_sweep(config), a);
  write_json(config, run_sweep(config), b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, FullSpaceCsvQuotesVectorsAndLeavesEmptyCells) {
  const std::string csv = csv_of(config_for(fig2_table(), Space::kFull, 3));
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, kCsvHeader);
  std::getline(lines, line);
  EXPECT_EQ(line, "0,InfiniteFamily,0,D,\"vec4:0,1,0,0\",1,1");
  std::string last;
  while (std::getline(lines, line)) last = line;
  EXPECT_EQ(last, "1.57079632679,NoPureNE,,,,,");
}

TEST(Sweep, JsonCarriesVerificationAndBoundaries) {
  auto config = config_for(fig2_table(), Space::kTwoParam, 5);
  config.format = OutputFormat::kJson;
  const auto j = sweep_to_json(config, run_sweep(config));
  EXPECT_EQ(j["config"]["space"], "two-param");
  ASSERT_EQ(j["rows"].size(), 9u);
  for (const auto& row : j["rows"])
    for (const auto& eq : row["equilibria"]) EXPECT_TRUE(eq["verified"].get<bool>());
  EXPECT_EQ(j["rows"][2]["region"], "Classical");

  const auto report = classify_region_twoparam(fig2_table(), Entanglement::make(thresholds(fig2_table()).gamma_th2));
  const auto rj = to_json(report);
  EXPECT_TRUE(rj["boundary"].get<bool>());
  EXPECT_EQ(rj["boundary_with"], "Quantum");
}

TEST(Sweep, ConfigValidation) {
  auto bad = [](auto mutate) {
    auto c = config_for(fig2_table(), Space::kTwoParam, 10);
    mutate(c);
    return c;
  };
  EXPECT_THROW(bad([](SweepConfig& c) { c.steps = 1; }).validate(), ValidationError);
  EXPECT_THROW(bad([](SweepConfig& c) { c.gamma_min = 1.0, c.gamma_max = 0.5; }).validate(),
               ValidationError);
  EXPECT_THROW(bad([](SweepConfig& c) { c.gamma_max = 2.0; }).validate(), ValidationError);
  EXPECT_THROW(bad([](SweepConfig& c) { c.eps = 0.0; }).validate(), ValidationError);
  EXPECT_THROW(bad([](SweepConfig& c) { c.grid_n = 7; }).validate(), ValidationError);
  EXPECT_THROW(parse_space("three-param"), ValidationError);
  EXPECT_THROW(parse_format("xml"), ValidationError);
}

TEST(Sweep, OracleCountsAttachedWhenRequested) {
  auto config = config_for(fig2_table(), Space::kTwoParam, 3);
  config.grid_n = 8;
  for (const auto& row : run_sweep(config)) {
    ASSERT_TRUE(row.oracle_profiles);
    EXPECT_GE(*row.oracle_profiles, row.equilibria.size());
  }
}

TEST(PlotScript, MarksThresholdsAndRegions) {
  const auto two = plot_script(run_sweep(config_for(fig2_table(), Space::kTwoParam, 20)), "s.csv",
                               Space::kTwoParam);
  EXPECT_NE(two.find("(\"gamma_th1\", "), std::string::npos);
  EXPECT_NE(two.find("(\"gamma_th2\", "), std::string::npos);
  EXPECT_NE(two.find("(\"Transitional\", "), std::string::npos);
  EXPECT_NE(two.find("\"s.csv\""), std::string::npos);

  const auto single = plot_script(run_sweep(config_for(fig3_table(), Space::kTwoParam, 20)), "s.csv",
                                  Space::kTwoParam);
  EXPECT_NE(single.find("(\"gamma_th\", "), std::string::npos);
  EXPECT_EQ(single.find("Transitional\", "), std::string::npos);

  const auto full = plot_script(run_sweep(config_for(fig2_table(), Space::kFull, 20)), "s.csv",
                                Space::kFull);
  EXPECT_NE(full.find("(\"gamma_B\", "), std::string::npos);
  EXPECT_NE(full.find("(\"NoPureNE\", "), std::string::npos);
}

TEST(PlotScript, ErrorsForEmptyRowsAndBadPaths) {
  EXPECT_THROW(plot_script({}, "x.csv", Space::kTwoParam), EmptyResultError);
  const auto rows = run_sweep(config_for(fig2_table(), Space::kTwoParam, 3));
  EXPECT_THROW(emit_plot_script(rows, "/nonexistent-dir/plot.py", "x.csv", Space::kTwoParam),
               IoError);
}

TEST(ThresholdReport, Layouts) {
  const auto f4 = report_thresholds(fig4_table());
  EXPECT_EQ(f4.regime, Regime::kAbove);
  ASSERT_EQ(f4.twoparam_layout.size(), 3u);
  EXPECT_EQ(f4.twoparam_layout[1].region, Region::kCoexistent);
  EXPECT_NEAR(f4.twoparam_layout[1].from, kPi / 6, 1e-12);
  EXPECT_NEAR(f4.twoparam_layout[1].to, kPi / 4, 1e-12);
  EXPECT_TRUE(f4.twoparam_layout[1].from_closed && f4.twoparam_layout[1].to_closed);

  const auto f3 = report_thresholds(fig3_table());
  EXPECT_EQ(f3.twoparam_thresholds.size(), 1u);
  EXPECT_EQ(f3.twoparam_layout.size(), 2u);
  EXPECT_NE(to_text(f3).find("single threshold"), std::string::npos);

  const auto f2 = report_thresholds(fig2_table());
  EXPECT_EQ(f2.twoparam_layout[1].region, Region::kTransitional);
  EXPECT_EQ(f2.full_layout[1].region, Region::kNoPureNE);
  EXPECT_EQ(to_json(f2)["regime"], "r+p<t+s");
}

// Each threshold lies in exactly the closed interval whose region the
// classifier reports there.
TEST(ThresholdReport, LayoutAgreesWithClassifierAtThresholds) {
  for (const auto& table : {fig2_table(), fig3_table(), fig4_table()}) {
    const auto rep = report_thresholds(table);
    auto owner = [](const std::vector<LayoutInterval>& layout, double g) {
      std::vector<Region> out;
      for (const auto& iv : layout)
        if ((g > iv.from || (iv.from_closed && g == iv.from)) &&
            (g < iv.to || (iv.to_closed && g == iv.to)))
          out.push_back(iv.region);
      return out;
    };
    for (double th : rep.twoparam_thresholds) {
      const auto regions = owner(rep.twoparam_layout, th);
      ASSERT_EQ(regions.size(), 1u);
      EXPECT_EQ(regions[0], classify_region_twoparam(table, Entanglement::make(th)).region);
    }
    const double gb = rep.thresholds.gamma_b;
    const auto regions = owner(rep.full_layout, gb);
    ASSERT_EQ(regions.size(), 1u);
    EXPECT_EQ(regions[0], classify_region_full(table, Entanglement::make(gb)).region);
  }
}

}  // namespace
}  // namespace qpd
