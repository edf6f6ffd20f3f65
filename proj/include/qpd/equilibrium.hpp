#pragma once

// Best responses, Nash checks, entanglement thresholds and region
// classification.
//
// The best response to u is the eigenvector of P(u) with the largest
// eigenvalue, and that eigenvalue is the payoff it earns. A profile
// (u_a, u_b) is a Nash equilibrium when each side attains the maximal
// eigenvalue of the response matrix built from the other.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpd/eigen.hpp"
#include "qpd/errors.hpp"
#include "qpd/payoff_tensor.hpp"
#include "qpd/quantum_core.hpp"
#include "qpd/strategy_space.hpp"

namespace qpd {

inline constexpr double kNashTolerance = 1e-9;
inline constexpr double kDegeneracyTolerance = 1e-9;
// |gamma - threshold| at or below this puts gamma on the boundary, where it
// belongs to both adjacent regions.
inline constexpr double kBoundaryTolerance = 1e-12;

// Sign-invariant max-norm distance between two strategies (U ~ -U).
template <std::size_t D>
double strategy_distance(const StrategyVec<D>& a, const StrategyVec<D>& b) {
  double plus = 0.0, minus = 0.0;
  for (std::size_t i = 0; i < D; ++i) {
    plus = std::max(plus, std::abs(a[i] - b[i]));
    minus = std::max(minus, std::abs(a[i] + b[i]));
  }
  return std::min(plus, minus);
}

template <std::size_t D>
struct BestResponse {
  EigenPair<D> best;                       // maximal eigenpair of P(u)
  std::vector<StrategyVec<D>> eigenspace;  // basis of the maximal eigenspace
  std::array<EigenPair<D>, D> spectrum;    // ascending

  double payoff() const { return best.value; }
  const StrategyVec<D>& strategy() const { return best.vector; }
  bool degenerate() const { return eigenspace.size() > 1; }
};

template <std::size_t D>
BestResponse<D> best_response(const PayoffTensor<D>& tensor, const StrategyVec<D>& u,
                              double degeneracy_tol = kDegeneracyTolerance) {
  const auto spectrum = eigen_symmetric(response_matrix(tensor, u).m);
  const EigenPair<D>& top = spectrum.back();
  std::vector<StrategyVec<D>> basis;
  for (auto it = spectrum.rbegin(); it != spectrum.rend(); ++it)
    if (top.value - it->value <= degeneracy_tol) basis.push_back(it->vector);
  std::sort(basis.begin(), basis.end());
  // Report the lexicographically smallest basis vector so ties resolve the
  // same way regardless of rounding in the eigenvalues.
  return {EigenPair<D>{top.value, basis.front()}, basis, spectrum};
}

struct Regret {
  double a;  // max eigenvalue of P(u_b) minus Alice's payoff
  double b;  // max eigenvalue of P(u_a) minus Bob's payoff
};

template <std::size_t D>
Regret nash_regret(const PayoffTensor<D>& tensor, const StrategyVec<D>& u_a,
                   const StrategyVec<D>& u_b) {
  const auto p_b = response_matrix(tensor, u_b);
  const auto p_a = response_matrix(tensor, u_a);
  return {eigen_symmetric(p_b.m).back().value - p_b.payoff(u_a),
          eigen_symmetric(p_a.m).back().value - p_a.payoff(u_b)};
}

template <std::size_t D>
bool is_nash(const PayoffTensor<D>& tensor, const StrategyVec<D>& u_a,
             const StrategyVec<D>& u_b, double eps = kNashTolerance) {
  if (!(eps > 0.0)) throw DomainError("is_nash: eps must be positive");
  const Regret r = nash_regret(tensor, u_a, u_b);
  return r.a <= eps && r.b <= eps;
}

// gamma_th1, gamma_th2 belong to the two-parameter space, gamma_b to the
// full SU(2) space.
struct Thresholds {
  double gamma_th1;
  double gamma_th2;
  double gamma_b;
};

inline Thresholds thresholds(const PayoffTable& table) {
  const double r = table.r(), p = table.p(), t = table.t(), s = table.s();
  return {std::asin(std::sqrt((p - s) / (t - s))),
          std::asin(std::sqrt((t - r) / (t - s))),
          std::asin(std::sqrt((p - s) / (p + t - r - s)))};
}

// How r + p compares with t + s; decides the order of the two thresholds.
enum class Regime { kBelow, kEqual, kAbove };

inline Regime regime(const PayoffTable& table) {
  const double lhs = table.p() - table.s(), rhs = table.t() - table.r();
  if (lhs < rhs) return Regime::kBelow;
  if (lhs > rhs) return Regime::kAbove;
  return Regime::kEqual;
}

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::kBelow: return "r+p<t+s";
    case Regime::kEqual: return "r+p=t+s";
    case Regime::kAbove: return "r+p>t+s";
  }
  return "?";
}

enum class Region { kClassical, kTransitional, kCoexistent, kQuantum, kInfiniteFamily, kNoPureNE };

inline std::string_view to_string(Region r) {
  switch (r) {
    case Region::kClassical: return "Classical";
    case Region::kTransitional: return "Transitional";
    case Region::kCoexistent: return "Coexistent";
    case Region::kQuantum: return "Quantum";
    case Region::kInfiniteFamily: return "InfiniteFamily";
    case Region::kNoPureNE: return "NoPureNE";
  }
  return "?";
}

template <std::size_t D>
struct Equilibrium {
  StrategyVec<D> strategy_a;
  StrategyVec<D> strategy_b;
  PayoffPair payoff;
  bool verified = false;
  std::optional<double> alpha;  // family parameter, full space only
};

template <std::size_t D>
struct RegionReport {
  double gamma;
  Region region;
  // Set when gamma sits on a threshold; the report then holds the
  // equilibria of both regions.
  std::optional<Region> boundary_with;
  std::vector<Equilibrium<D>> equilibria;
  Thresholds thresholds;
  // Symbolic description and common payoff of the equilibrium family.
  std::optional<std::string> family;
  std::optional<double> family_payoff;
};

namespace detail {

template <std::size_t D>
Equilibrium<D> verified_profile(const PayoffTensor<D>& tensor, const StrategyVec<D>& a,
                                const StrategyVec<D>& b, double eps,
                                std::optional<double> alpha = std::nullopt) {
  if (!is_nash(tensor, a, b, eps)) {
    const Regret r = nash_regret(tensor, a, b);
    throw ConsistencyError("profile (" + format_strategy(a) + ", " + format_strategy(b) +
                           ") failed Nash verification at gamma=" +
                           std::to_string(tensor.gamma()) + " (regrets " +
                           std::to_string(r.a) + ", " + std::to_string(r.b) + ")");
  }
  return {a, b, payoff_via_tensor(tensor, a, b), true, alpha};
}

inline bool near(double x, double y) { return std::abs(x - y) <= kBoundaryTolerance; }

}  // namespace detail

// Two-parameter space. D x D is an equilibrium for gamma <= gamma_th1,
// Q x Q for gamma >= gamma_th2, and D x Q / Q x D on [gamma_th1, gamma_th2]
// when that interval is non-empty.
inline RegionReport<3> classify_region_twoparam(const PayoffTable& table,
                                                const Entanglement& gamma,
                                                double eps = kNashTolerance) {
  const Thresholds th = thresholds(table);
  const double g = gamma.gamma();
  const double lo = std::min(th.gamma_th1, th.gamma_th2);
  const double hi = std::max(th.gamma_th1, th.gamma_th2);
  const double tol = kBoundaryTolerance;

  RegionReport<3> report{g, Region::kClassical, std::nullopt, {}, th, std::nullopt, std::nullopt};
  const Region middle =
      th.gamma_th1 < th.gamma_th2 ? Region::kTransitional : Region::kCoexistent;
  const bool single_threshold = detail::near(lo, hi);

  if (g < lo - tol) {
    report.region = Region::kClassical;
  } else if (g > hi + tol) {
    report.region = Region::kQuantum;
  } else if (single_threshold) {
    report.region = Region::kQuantum;
    report.boundary_with = Region::kClassical;
  } else {
    report.region = middle;
    if (detail::near(g, lo))
      report.boundary_with = Region::kClassical;
    else if (detail::near(g, hi))
      report.boundary_with = Region::kQuantum;
  }

  const auto tensor = build_tensor_twoparam(table, gamma);
  const auto d = defect<3>(), q = quantum<3>();
  if (g <= th.gamma_th1 + tol) report.equilibria.push_back(detail::verified_profile(tensor, d, d, eps));
  if (g >= th.gamma_th1 - tol && g <= th.gamma_th2 + tol) {
    report.equilibria.push_back(detail::verified_profile(tensor, d, q, eps));
    report.equilibria.push_back(detail::verified_profile(tensor, q, d, eps));
  }
  if (g >= th.gamma_th2 - tol) report.equilibria.push_back(detail::verified_profile(tensor, q, q, eps));
  return report;
}

// Sampled members of the {(0,a,b,0), (0,b,a,0)} family.
inline constexpr std::array<double, 5> kFamilySampleAlphas{0.0, 0.25, 0.5, 0.75, 1.0};

// Full SU(2) space. Below gamma_b every {(0,a,b,0), (0,b,a,0)} with
// a^2 + b^2 = 1 is an equilibrium paying p + (r-p) sin^2(gamma) to both;
// above it no pure equilibrium exists.
inline RegionReport<4> classify_region_full(const PayoffTable& table,
                                            const Entanglement& gamma,
                                            double eps = kNashTolerance) {
  const Thresholds th = thresholds(table);
  const double g = gamma.gamma();
  RegionReport<4> report{g, Region::kNoPureNE, std::nullopt, {}, th, std::nullopt, std::nullopt};
  if (g > th.gamma_b + kBoundaryTolerance) return report;

  report.region = Region::kInfiniteFamily;
  if (detail::near(g, th.gamma_b)) report.boundary_with = Region::kNoPureNE;
  report.family = "{(0,a,b,0),(0,b,a,0)}: a^2+b^2=1";
  report.family_payoff = table.p() + (table.r() - table.p()) * gamma.sin_sq();

  const auto tensor = build_tensor_full(table, gamma);
  for (double alpha : kFamilySampleAlphas) {
    const double beta = std::sqrt(1.0 - alpha * alpha);
    report.equilibria.push_back(detail::verified_profile(
        tensor, StrategyVec4::normalized({0.0, alpha, beta, 0.0}),
        StrategyVec4::normalized({0.0, beta, alpha, 0.0}), eps, alpha));
  }
  return report;
}

struct DominanceCycle {
  // members[k + 1] is the best response to members[k]; members[0] closes it.
  std::array<StrategyVec4, 4> members;
  std::array<double, 4> response_payoffs;
  double residual;  // worst sign-invariant distance, computed vs expected
};

inline constexpr double kCycleTolerance = 1e-9;

// Above gamma_b: (0,a,b,0) -> (a,0,0,-b) -> (0,b,-a,0) -> (b,0,0,a) -> back,
// each the unique best response to its predecessor. Uses the gamma the tensor
// was built at.
inline DominanceCycle dominance_cycle(const PayoffTensor<4>& tensor, double alpha) {
  const double gb = thresholds(tensor.table()).gamma_b;
  if (!(tensor.gamma() > gb))
    throw DomainError("dominance_cycle requires gamma > gamma_b = " + std::to_string(gb) +
                      ", got " + std::to_string(tensor.gamma()));
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError("dominance_cycle: alpha must lie in [0, 1]");
  const double beta = std::sqrt(1.0 - alpha * alpha);

  const std::array<StrategyVec4, 4> members{
      canonicalize(StrategyVec4::normalized({0.0, alpha, beta, 0.0})),
      canonicalize(StrategyVec4::normalized({alpha, 0.0, 0.0, -beta})),
      canonicalize(StrategyVec4::normalized({0.0, beta, -alpha, 0.0})),
      canonicalize(StrategyVec4::normalized({beta, 0.0, 0.0, alpha}))};

  std::array<double, 4> payoffs{};
  double residual = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto br = best_response(tensor, members[k]);
    const auto& next = members[(k + 1) % 4];
    const double gap = br.degenerate() ? 1.0 : strategy_distance(br.strategy(), next);
    if (gap > kCycleTolerance)
      throw ConsistencyError("dominance cycle broken: best response to " +
                             format_strategy(members[k]) + " is " +
                             format_strategy(br.strategy()) + ", expected " +
                             format_strategy(next));
    residual = std::max(residual, gap);
    payoffs[k] = br.payoff();
  }
  return {members, payoffs, residual};
}

}  // namespace qpd
