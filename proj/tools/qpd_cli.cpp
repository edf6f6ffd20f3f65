// qpd: command-line front end for the quantized Prisoners' Dilemma analysis.
//
//   qpd sweep          payoff-vs-gamma diagram data (CSV or JSON), optional plot script
//   qpd thresholds     gamma_th1, gamma_th2, gamma_B and the region layout
//   qpd tensor         nonzero payoff-tensor elements as JSON
//   qpd best-response  maximal eigenpair of the response matrix
//   qpd verify         eigenvector method vs brute-force grid oracle
//   qpd payoff         payoffs of one profile, tensor and simulation routes
//
// Exit codes: 0 success, 2 invalid configuration, 3 I/O failure, 4 empty result.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qpd/qpd.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitEmpty = 4;

qpd::PayoffTable parse_payoffs(const std::string& text) {
  const auto v = qpd::detail::parse_numbers(text, text);
  if (v.size() != 4) throw qpd::ValidationError("--payoffs needs four values r,p,t,s");
  return qpd::PayoffTable::make(v[0], v[1], v[2], v[3]);
}

// Writes to --out when given, otherwise stdout.
void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw qpd::IoError("cannot open '" + out_path + "' for writing");
  out << text;
  if (!out) throw qpd::IoError("failed writing '" + out_path + "'");
}

struct Common {
  std::string payoffs;
  std::string space = "two-param";
  double gamma = 0.0;
  bool degrees = false;
  std::string out;

  double angle(double value) const {
    return degrees ? value / 180.0 * std::numbers::pi : value;
  }
  qpd::Entanglement entanglement() const { return qpd::Entanglement::make(angle(gamma)); }
};

void add_table_options(CLI::App* cmd, Common& c) {
  cmd->add_option("--payoffs", c.payoffs, "Classical payoffs r,p,t,s (t > r > p > s)")
      ->required();
  cmd->add_option("--out", c.out, "Output file (default: stdout)");
}

void add_game_options(CLI::App* cmd, Common& c) {
  add_table_options(cmd, c);
  cmd->add_option("--space", c.space, "Strategy space: two-param | full");
  cmd->add_option("--gamma", c.gamma, "Entanglement angle (radians)")->required();
  cmd->add_flag("--degrees", c.degrees, "Read angles in degrees");
}

// Calls fn.template operator()<D>() with D = 3 or 4 for the selected space.
template <typename Fn>
auto with_space(qpd::Space space, Fn&& fn) {
  if (space == qpd::Space::kTwoParam) return fn.template operator()<3>();
  return fn.template operator()<4>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantized Prisoners' Dilemma: equilibria, thresholds and payoff diagrams"};
  app.require_subcommand(1);

  Common common;

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Classify the game over a range of gamma");
  std::string format = "csv";
  double gamma_min = 0.0, gamma_max = std::numbers::pi / 2;
  int steps = 100;
  double eps = qpd::kNashTolerance;
  std::optional<int> grid_n;
  std::string plot_path;
  add_table_options(sweep, common);
  sweep->add_option("--space", common.space, "Strategy space: two-param | full");
  sweep->add_option("--gamma-min", gamma_min, "Lower end of the gamma range");
  sweep->add_option("--gamma-max", gamma_max, "Upper end of the gamma range");
  sweep->add_option("--steps", steps, "Evenly spaced samples (>= 2)");
  sweep->add_option("--format", format, "csv | json");
  sweep->add_option("--eps", eps, "Nash tolerance");
  sweep->add_option("--grid-n", grid_n, "Also run the grid oracle at this resolution");
  sweep->add_option("--plot", plot_path, "Write a matplotlib script for the CSV output");
  sweep->add_flag("--degrees", common.degrees, "Read angles in degrees");

  // thresholds
  auto* thr = app.add_subcommand("thresholds", "Report entanglement thresholds");
  std::string thr_format = "text";
  add_table_options(thr, common);
  thr->add_option("--format", thr_format, "text | json");

  // tensor
  auto* tensor_cmd = app.add_subcommand("tensor", "Dump nonzero payoff-tensor elements");
  add_game_options(tensor_cmd, common);

  // best-response
  auto* br_cmd = app.add_subcommand("best-response", "Best response to a strategy");
  std::string against;
  add_game_options(br_cmd, common);
  br_cmd->add_option("--against", against, "Opponent strategy literal")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "Compare the eigenvector method with the grid oracle");
  int verify_n = 32;
  bool scan = false;
  std::optional<double> scan_eps;
  add_game_options(verify, common);
  verify->add_option("--against", against, "Opponent strategy literal")->required();
  verify->add_option("--grid-n", verify_n, "Grid resolution (even, >= 8)");
  verify->add_flag("--scan", scan, "Also run the epsilon-Nash grid scan");
  verify->add_option("--eps", scan_eps, "Scan tolerance (default: resolution-calibrated)");

  // payoff
  auto* payoff_cmd = app.add_subcommand("payoff", "Payoffs of a single profile");
  std::string lit_a, lit_b;
  double payoff_eps = qpd::kNashTolerance;
  add_game_options(payoff_cmd, common);
  payoff_cmd->add_option("--a", lit_a, "Alice's strategy literal")->required();
  payoff_cmd->add_option("--b", lit_b, "Bob's strategy literal")->required();
  payoff_cmd->add_option("--eps", payoff_eps, "Nash tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const qpd::PayoffTable table = parse_payoffs(common.payoffs);

    if (*sweep) {
      qpd::SweepConfig config{table,
                              qpd::parse_space(common.space),
                              common.angle(gamma_min),
                              common.angle(gamma_max),
                              steps,
                              qpd::parse_format(format),
                              eps,
                              grid_n};
      config.validate();
      if (!plot_path.empty() && config.format != qpd::OutputFormat::kCsv)
        throw qpd::ValidationError("--plot needs --format csv");
      const auto rows = qpd::run_sweep(config);
      std::ostringstream text;
      if (config.format == qpd::OutputFormat::kCsv)
        qpd::write_csv(rows, text);
      else
        qpd::write_json(config, rows, text);
      emit(text.str(), common.out);
      if (!plot_path.empty())
        qpd::emit_plot_script(rows, plot_path, common.out.empty() ? "sweep.csv" : common.out,
                              config.space);
      return kExitOk;
    }

    if (*thr) {
      const auto rep = qpd::report_thresholds(table);
      if (thr_format == "json")
        emit(qpd::to_json(rep).dump(2) + "\n", common.out);
      else if (thr_format == "text")
        emit(qpd::to_text(rep), common.out);
      else
        throw qpd::ValidationError("unknown format '" + thr_format + "' (text|json)");
      return kExitOk;
    }

    const qpd::Space space = qpd::parse_space(common.space);
    const qpd::Entanglement gamma = common.entanglement();

    if (*tensor_cmd) {
      const auto j = with_space(space, [&]<std::size_t D>() {
        return qpd::tensor_to_json(qpd::build_tensor<D>(table, gamma));
      });
      emit(j.dump(2) + "\n", common.out);
      return kExitOk;
    }

    if (*br_cmd) {
      const auto j = with_space(space, [&]<std::size_t D>() {
        const auto u = qpd::parse_strategy<D>(against, common.degrees);
        const auto br = qpd::best_response(qpd::build_tensor<D>(table, gamma), u);
        nlohmann::json out = qpd::to_json(br);
        out["against"] = qpd::to_json(u);
        out["gamma"] = gamma.gamma();
        return out;
      });
      emit(j.dump(2) + "\n", common.out);
      return kExitOk;
    }

    if (*verify) {
      const auto j = with_space(space, [&]<std::size_t D>() {
        const auto tensor = qpd::build_tensor<D>(table, gamma);
        const auto u = qpd::parse_strategy<D>(against, common.degrees);
        const auto method = qpd::best_response(tensor, u);
        const auto oracle = qpd::grid_best_response(tensor, u, verify_n);
        nlohmann::json out{
            {"gamma", gamma.gamma()},
            {"against", qpd::to_json(u)},
            {"method_result", {{"payoff", method.payoff()}, {"strategy", qpd::to_json(method.strategy())}}},
            {"oracle_result",
             {{"payoff", oracle.payoff}, {"strategy", qpd::to_json(oracle.strategy)}, {"grid_n", verify_n}}},
            {"gap", method.payoff() - oracle.payoff}};
        if (scan) {
          const double e = scan_eps.value_or(qpd::resolution_eps(table, verify_n));
          const auto result = qpd::grid_nash_scan(tensor, verify_n, e);
          nlohmann::json profiles = nlohmann::json::array();
          for (const auto& p : result.profiles)
            profiles.push_back({{"strategy_a", qpd::format_strategy(p.strategy_a)},
                                {"strategy_b", qpd::format_strategy(p.strategy_b)},
                                {"regret_a", p.exact_regret.a},
                                {"regret_b", p.exact_regret.b}});
          out["scan"] = {{"eps", e},
                         {"grid_points", result.grid_points},
                         {"grid_candidates", result.grid_candidates},
                         {"profiles", std::move(profiles)}};
        }
        return out;
      });
      emit(j.dump(2) + "\n", common.out);
      return kExitOk;
    }

    if (*payoff_cmd) {
      const auto j = with_space(space, [&]<std::size_t D>() {
        const auto a = qpd::parse_strategy<D>(lit_a, common.degrees);
        const auto b = qpd::parse_strategy<D>(lit_b, common.degrees);
        const auto tensor = qpd::build_tensor<D>(table, gamma);
        const auto via_tensor = qpd::payoff_via_tensor(tensor, a, b);
        const auto simulated = qpd::simulate_payoffs(a, b, table, gamma);
        const auto regret = qpd::nash_regret(tensor, a, b);
        return nlohmann::json{
            {"gamma", gamma.gamma()},
            {"strategy_a", qpd::to_json(a)},
            {"strategy_b", qpd::to_json(b)},
            {"tensor", {{"payoff_a", via_tensor.payoff_a}, {"payoff_b", via_tensor.payoff_b}}},
            {"simulation", {{"payoff_a", simulated.payoff_a}, {"payoff_b", simulated.payoff_b}}},
            {"regret", {{"a", regret.a}, {"b", regret.b}}},
            {"is_nash", regret.a <= payoff_eps && regret.b <= payoff_eps}};
      });
      emit(j.dump(2) + "\n", common.out);
      return kExitOk;
    }
  } catch (const qpd::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qpd::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qpd::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const qpd::EmptyResultError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEmpty;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
