#pragma once

// Threshold summaries and JSON views used by the command-line tool.

#include <cstddef>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qpd/equilibrium.hpp"
#include "qpd/oracle.hpp"
#include "qpd/payoff_tensor.hpp"
#include "qpd/strategy_space.hpp"
#include "qpd/sweep.hpp"

namespace qpd {

// One interval of the region layout. A threshold belongs to the interval
// closed at it, matching the region the classifiers report there.
struct LayoutInterval {
  Region region;
  double from;
  double to;
  bool from_closed;
  bool to_closed;
};

struct ThresholdReport {
  PayoffTable table;
  Thresholds thresholds;
  Regime regime;
  std::vector<double> twoparam_thresholds;  // distinct, ascending
  std::vector<LayoutInterval> twoparam_layout;
  std::vector<LayoutInterval> full_layout;
};

inline ThresholdReport report_thresholds(const PayoffTable& table) {
  const Thresholds th = thresholds(table);
  const Regime reg = regime(table);
  ThresholdReport out{table, th, reg, space_thresholds(th, Space::kTwoParam), {}, {}};
  constexpr double kTop = std::numbers::pi / 2;

  if (reg == Regime::kEqual) {
    out.twoparam_layout = {{Region::kClassical, 0.0, th.gamma_th1, true, false},
                           {Region::kQuantum, th.gamma_th1, kTop, true, true}};
  } else {
    const double lo = std::min(th.gamma_th1, th.gamma_th2);
    const double hi = std::max(th.gamma_th1, th.gamma_th2);
    const Region middle = reg == Regime::kBelow ? Region::kTransitional : Region::kCoexistent;
    out.twoparam_layout = {{Region::kClassical, 0.0, lo, true, false},
                           {middle, lo, hi, true, true},
                           {Region::kQuantum, hi, kTop, false, true}};
  }
  out.full_layout = {{Region::kInfiniteFamily, 0.0, th.gamma_b, true, true},
                     {Region::kNoPureNE, th.gamma_b, kTop, false, true}};
  return out;
}

inline nlohmann::json to_json(const LayoutInterval& iv) {
  return {{"region", to_string(iv.region)},
          {"from", iv.from},
          {"to", iv.to},
          {"from_closed", iv.from_closed},
          {"to_closed", iv.to_closed}};
}

inline nlohmann::json to_json(const ThresholdReport& rep) {
  nlohmann::json two = nlohmann::json::array(), full = nlohmann::json::array();
  for (const auto& iv : rep.twoparam_layout) two.push_back(to_json(iv));
  for (const auto& iv : rep.full_layout) full.push_back(to_json(iv));
  return {{"payoffs",
           {{"r", rep.table.r()}, {"p", rep.table.p()}, {"t", rep.table.t()}, {"s", rep.table.s()}}},
          {"thresholds", to_json(rep.thresholds)},
          {"regime", to_string(rep.regime)},
          {"twoparam_thresholds", rep.twoparam_thresholds},
          {"twoparam_layout", std::move(two)},
          {"full_layout", std::move(full)}};
}

inline std::string to_text(const ThresholdReport& rep) {
  using detail::format_g;
  auto interval = [](const LayoutInterval& iv) {
    return std::string(iv.from_closed ? "[" : "(") + format_g(iv.from) + ", " +
           format_g(iv.to) + (iv.to_closed ? "]" : ")");
  };
  std::ostringstream out;
  out << "payoffs: r=" << format_g(rep.table.r()) << " p=" << format_g(rep.table.p())
      << " t=" << format_g(rep.table.t()) << " s=" << format_g(rep.table.s()) << '\n';
  out << "regime: " << to_string(rep.regime) << '\n';
  out << "gamma_th1 = " << format_g(rep.thresholds.gamma_th1) << '\n';
  out << "gamma_th2 = " << format_g(rep.thresholds.gamma_th2) << '\n';
  out << "gamma_B   = " << format_g(rep.thresholds.gamma_b) << '\n';
  if (rep.twoparam_thresholds.size() == 1)
    out << "two-parameter space: single threshold at " << format_g(rep.twoparam_thresholds[0])
        << '\n';
  else
    out << "two-parameter space: " << rep.twoparam_thresholds.size() << " thresholds\n";
  for (const auto& iv : rep.twoparam_layout)
    out << "  " << interval(iv) << "  " << to_string(iv.region) << '\n';
  out << "full space:\n";
  for (const auto& iv : rep.full_layout)
    out << "  " << interval(iv) << "  " << to_string(iv.region) << '\n';
  return out.str();
}

template <std::size_t D>
nlohmann::json tensor_to_json(const PayoffTensor<D>& tensor) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : tensor.nonzero_entries())
    entries.push_back({{"i", e.i}, {"j", e.j}, {"k", e.k}, {"l", e.l}, {"value", e.value}});
  return entries;
}

template <std::size_t D>
nlohmann::json to_json(const StrategyVec<D>& u) {
  return {{"literal", format_strategy(u)}, {"vector", u.components()}};
}

template <std::size_t D>
nlohmann::json to_json(const BestResponse<D>& br) {
  nlohmann::json spectrum = nlohmann::json::array(), space = nlohmann::json::array();
  for (const auto& pair : br.spectrum)
    spectrum.push_back({{"eigenvalue", pair.value}, {"eigenvector", pair.vector.components()}});
  for (const auto& v : br.eigenspace) space.push_back(to_json(v));
  return {{"payoff", br.payoff()},
          {"strategy", to_json(br.strategy())},
          {"degenerate", br.degenerate()},
          {"eigenspace", std::move(space)},
          {"spectrum", std::move(spectrum)}};
}

}  // namespace qpd
