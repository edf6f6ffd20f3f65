#pragma once

// Entanglement sweeps: classify the game at a series of gamma values and
// write the equilibrium payoffs as CSV or JSON, plus a matplotlib script
// that draws the payoff-vs-gamma diagram.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qpd/equilibrium.hpp"
#include "qpd/errors.hpp"
#include "qpd/oracle.hpp"
#include "qpd/quantum_core.hpp"
#include "qpd/strategy_space.hpp"

namespace qpd {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyResultError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Space { kTwoParam, kFull };
enum class OutputFormat { kCsv, kJson };

inline std::string_view to_string(Space s) {
  return s == Space::kTwoParam ? "two-param" : "full";
}

inline Space parse_space(std::string_view text) {
  if (text == "two-param") return Space::kTwoParam;
  if (text == "full") return Space::kFull;
  throw ValidationError("unknown space '" + std::string(text) + "' (two-param|full)");
}

inline OutputFormat parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::kCsv;
  if (text == "json") return OutputFormat::kJson;
  throw ValidationError("unknown format '" + std::string(text) + "' (csv|json)");
}

// Gap on either side of an analytic threshold at which extra samples are
// placed, so payoff jumps show up in the output.
inline constexpr double kThresholdSampleOffset = 1e-9;

struct SweepConfig {
  PayoffTable table;
  Space space = Space::kTwoParam;
  double gamma_min = 0.0;
  double gamma_max = std::numbers::pi / 2;
  int steps = 100;
  OutputFormat format = OutputFormat::kCsv;
  double eps = kNashTolerance;
  std::optional<int> grid_n;  // run the grid oracle on every sample

  void validate() const {
    if (!(gamma_min >= 0.0 && gamma_max <= std::numbers::pi / 2 && gamma_min < gamma_max))
      throw ValidationError("need 0 <= gamma-min < gamma-max <= pi/2 (got " +
                            detail::format_g(gamma_min) + ", " +
                            detail::format_g(gamma_max) + ")");
    if (steps < 2) throw ValidationError("steps must be >= 2");
    if (!(eps > 0.0)) throw ValidationError("eps must be positive");
    if (grid_n && (*grid_n < 8 || *grid_n % 2 != 0))
      throw ValidationError("grid-n must be an even integer >= 8");
  }
};

struct SweepEquilibrium {
  std::string strategy_a;
  std::string strategy_b;
  double payoff_a = 0.0;
  double payoff_b = 0.0;
  bool verified = false;
  std::optional<double> alpha;
};

struct SweepRow {
  double gamma = 0.0;
  Region region = Region::kClassical;
  std::optional<Region> boundary_with;
  std::vector<SweepEquilibrium> equilibria;
  Thresholds thresholds{};
  std::optional<std::string> family;
  std::optional<double> family_payoff;
  // Grid-oracle findings when SweepConfig::grid_n is set.
  std::optional<std::size_t> oracle_candidates;
  std::optional<std::size_t> oracle_profiles;
};

template <std::size_t D>
SweepRow make_row(const RegionReport<D>& report) {
  SweepRow row;
  row.gamma = report.gamma;
  row.region = report.region;
  row.boundary_with = report.boundary_with;
  row.thresholds = report.thresholds;
  row.family = report.family;
  row.family_payoff = report.family_payoff;
  for (const auto& eq : report.equilibria)
    row.equilibria.push_back({format_strategy(eq.strategy_a), format_strategy(eq.strategy_b),
                              eq.payoff.payoff_a, eq.payoff.payoff_b, eq.verified, eq.alpha});
  return row;
}

// The thresholds that matter for a space.
inline std::vector<double> space_thresholds(const Thresholds& th, Space space) {
  if (space == Space::kFull) return {th.gamma_b};
  std::vector<double> out{th.gamma_th1};
  if (th.gamma_th2 != th.gamma_th1) out.push_back(th.gamma_th2);
  std::sort(out.begin(), out.end());
  return out;
}

// `steps` evenly spaced samples on [gamma_min, gamma_max], plus samples just
// either side of each threshold inside the range. Strictly increasing.
inline std::vector<double> sweep_samples(const SweepConfig& config) {
  std::vector<double> g;
  g.reserve(config.steps + 4);
  const double span = config.gamma_max - config.gamma_min;
  for (int i = 0; i < config.steps; ++i)
    g.push_back(i + 1 == config.steps
                    ? config.gamma_max
                    : config.gamma_min + span * i / (config.steps - 1));
  for (double th : space_thresholds(thresholds(config.table), config.space))
    for (double x : {th - kThresholdSampleOffset, th + kThresholdSampleOffset})
      if (x >= config.gamma_min && x <= config.gamma_max) g.push_back(x);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

namespace detail {

template <std::size_t D>
void attach_oracle(SweepRow& row, const SweepConfig& config, const Entanglement& gamma) {
  const int n = *config.grid_n;
  const auto scan = grid_nash_scan(build_tensor<D>(config.table, gamma), n,
                                   resolution_eps(config.table, n));
  row.oracle_candidates = scan.grid_candidates;
  row.oracle_profiles = scan.profiles.size();
}

}  // namespace detail

// Samples are classified in parallel; each writes its own slot, so the
// result is identical to a sequential run.
inline std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  config.validate();
  const auto samples = sweep_samples(config);
  std::vector<SweepRow> rows(samples.size());
  detail::parallel_for(samples.size(), [&](std::size_t i) {
    const auto gamma = Entanglement::make(samples[i]);
    if (config.space == Space::kTwoParam) {
      rows[i] = make_row(classify_region_twoparam(config.table, gamma, config.eps));
      if (config.grid_n) detail::attach_oracle<3>(rows[i], config, gamma);
    } else {
      rows[i] = make_row(classify_region_full(config.table, gamma, config.eps));
      if (config.grid_n) detail::attach_oracle<4>(rows[i], config, gamma);
    }
  });
  return rows;
}

inline constexpr std::string_view kCsvHeader =
    "gamma,region,eq_index,strategy_a,strategy_b,payoff_a,payoff_b";

namespace detail {

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace detail

// One line per equilibrium; rows without equilibria get empty cells.
// Numbers use 12 significant digits.
inline void write_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& row : rows) {
    const std::string lead =
        detail::format_g(row.gamma) + ',' + std::string(to_string(row.region)) + ',';
    if (row.equilibria.empty()) {
      out << lead << ",,,,\n";
      continue;
    }
    for (std::size_t i = 0; i < row.equilibria.size(); ++i) {
      const auto& eq = row.equilibria[i];
      out << lead << i << ',' << detail::csv_cell(eq.strategy_a) << ','
          << detail::csv_cell(eq.strategy_b) << ',' << detail::format_g(eq.payoff_a) << ','
          << detail::format_g(eq.payoff_b) << '\n';
    }
  }
}

inline nlohmann::json to_json(const Thresholds& th) {
  return {{"gamma_th1", th.gamma_th1}, {"gamma_th2", th.gamma_th2}, {"gamma_b", th.gamma_b}};
}

inline nlohmann::json to_json(const SweepRow& row) {
  nlohmann::json eqs = nlohmann::json::array();
  for (const auto& eq : row.equilibria) {
    nlohmann::json e{{"strategy_a", eq.strategy_a},
                     {"strategy_b", eq.strategy_b},
                     {"payoff_a", eq.payoff_a},
                     {"payoff_b", eq.payoff_b},
                     {"verified", eq.verified}};
    if (eq.alpha) e["alpha"] = *eq.alpha;
    eqs.push_back(std::move(e));
  }
  nlohmann::json j{{"gamma", row.gamma},
                   {"region", to_string(row.region)},
                   {"equilibria", std::move(eqs)},
                   {"thresholds", to_json(row.thresholds)}};
  if (row.boundary_with) {
    j["boundary"] = true;
    j["boundary_with"] = to_string(*row.boundary_with);
  }
  if (row.family) j["family"] = *row.family;
  if (row.family_payoff) j["family_payoff"] = *row.family_payoff;
  if (row.oracle_candidates) j["oracle_candidates"] = *row.oracle_candidates;
  if (row.oracle_profiles) j["oracle_profiles"] = *row.oracle_profiles;
  return j;
}

template <std::size_t D>
nlohmann::json to_json(const RegionReport<D>& report) {
  return to_json(make_row(report));
}

inline nlohmann::json sweep_to_json(const SweepConfig& config, const std::vector<SweepRow>& rows) {
  nlohmann::json cfg{{"payoffs",
                      {{"r", config.table.r()},
                       {"p", config.table.p()},
                       {"t", config.table.t()},
                       {"s", config.table.s()}}},
                     {"space", to_string(config.space)},
                     {"gamma_min", config.gamma_min},
                     {"gamma_max", config.gamma_max},
                     {"steps", config.steps},
                     {"eps", config.eps}};
  if (config.grid_n) cfg["grid_n"] = *config.grid_n;
  nlohmann::json out{{"config", std::move(cfg)}, {"rows", nlohmann::json::array()}};
  for (const auto& row : rows) out["rows"].push_back(to_json(row));
  return out;
}

inline void write_json(const SweepConfig& config, const std::vector<SweepRow>& rows,
                       std::ostream& out) {
  out << sweep_to_json(config, rows).dump(2) << '\n';
}

// Contiguous runs of one region label, as (label, first gamma, last gamma).
struct RegionSpan {
  Region region;
  double from;
  double to;
};

inline std::vector<RegionSpan> region_spans(const std::vector<SweepRow>& rows) {
  std::vector<RegionSpan> spans;
  for (const auto& row : rows) {
    if (!spans.empty() && spans.back().region == row.region)
      spans.back().to = row.gamma;
    else
      spans.push_back({row.region, row.gamma, row.gamma});
  }
  return spans;
}

// Self-contained matplotlib script: reads the sweep CSV (path embedded, or
// argv[1]), plots Alice's payoff for every equilibrium against gamma, shades
// the regions and marks thresholds inside the sampled range.
inline std::string plot_script(const std::vector<SweepRow>& rows, const std::string& csv_path,
                               Space space) {
  if (rows.empty()) throw EmptyResultError("no sweep rows to plot");
  const double lo = rows.front().gamma, hi = rows.back().gamma;

  std::ostringstream th_list;
  const Thresholds& th = rows.front().thresholds;
  std::vector<std::pair<std::string, double>> named;
  if (space == Space::kFull) {
    named.emplace_back("gamma_B", th.gamma_b);
  } else if (th.gamma_th1 == th.gamma_th2) {
    named.emplace_back("gamma_th", th.gamma_th1);
  } else {
    named.emplace_back("gamma_th1", th.gamma_th1);
    named.emplace_back("gamma_th2", th.gamma_th2);
  }
  for (const auto& [name, value] : named)
    if (value > lo && value < hi)
      th_list << "    (\"" << name << "\", " << detail::format_g(value, 17) << "),\n";

  std::ostringstream span_list;
  for (const auto& s : region_spans(rows))
    span_list << "    (\"" << to_string(s.region) << "\", " << detail::format_g(s.from, 17)
              << ", " << detail::format_g(s.to, 17) << "),\n";

  std::ostringstream py;
  py << R"(#!/usr/bin/env python3
# Payoff of Alice at equilibrium versus entanglement gamma.
# Usage: python3 this_script.py [sweep.csv] [output.png]
import csv
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

CSV_PATH = sys.argv[1] if len(sys.argv) > 1 else )"
     << nlohmann::json(csv_path).dump() << R"(
OUT_PATH = sys.argv[2] if len(sys.argv) > 2 else "payoff_vs_gamma.png"
SPACE = )" << nlohmann::json(std::string(to_string(space))).dump()
     << R"(
THRESHOLDS = [
)" << th_list.str()
     << R"(]
REGIONS = [
)" << span_list.str()
     << R"(]
COLORS = {
    "Classical": "#dde6f5",
    "Transitional": "#f5eedd",
    "Coexistent": "#e6f5dd",
    "Quantum": "#f5dde6",
    "InfiniteFamily": "#dde6f5",
    "NoPureNE": "#eeeeee",
}

series = {}
with open(CSV_PATH, newline="") as f:
    for row in csv.DictReader(f):
        if row["eq_index"] == "":
            continue
        key = (row["strategy_a"], row["strategy_b"])
        if SPACE == "full":
            key = ("family", "")
        series.setdefault(key, []).append((float(row["gamma"]), float(row["payoff_a"])))

fig, ax = plt.subplots(figsize=(7, 4.5))
for name, lo, hi in REGIONS:
    ax.axvspan(lo, hi, color=COLORS.get(name, "#ffffff"), zorder=0)
    ax.text((lo + hi) / 2, 1.01, name, transform=ax.get_xaxis_transform(),
            ha="center", va="bottom", fontsize=8)
for name, value in THRESHOLDS:
    ax.axvline(value, color="k", linestyle="--", linewidth=0.8)
    ax.text(value, 0.02, " " + name, transform=ax.get_xaxis_transform(),
            rotation=90, va="bottom", fontsize=8)
for (a, b), pts in sorted(series.items()):
    pts.sort()
    label = "family" if a == "family" else a + " x " + b
    ax.plot([g for g, _ in pts], [v for _, v in pts], ".", markersize=3, label=label)
ax.set_xlabel("gamma")
ax.set_ylabel("payoff of Alice")
ax.legend(loc="best", fontsize=8)
fig.tight_layout()
fig.savefig(OUT_PATH, dpi=150)
print("wrote", OUT_PATH)
)";
  return py.str();
}

inline void emit_plot_script(const std::vector<SweepRow>& rows, const std::string& path,
                             const std::string& csv_path, Space space) {
  const std::string text = plot_script(rows, csv_path, space);
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace qpd
