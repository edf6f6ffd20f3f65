#pragma once

// Brute-force verification over a deterministic grid on the strategy sphere.
// Nothing here uses the eigen-solver except the second stage of
// grid_nash_scan, which re-checks grid findings against the exact maximum.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "qpd/equilibrium.hpp"
#include "qpd/errors.hpp"
#include "qpd/payoff_tensor.hpp"
#include "qpd/strategy_space.hpp"

namespace qpd {

// Hyperspherical product grid with angular step h = pi / n over the
// hemisphere w >= 0, one representative per +-u pair (all canonical).
//
//   S^2 (w,y,z):   w = cos a, (y,z) = sin a (cos b, sin b)
//   S^3 (w,x,y,z): w = cos a, x = sin a cos c, (y,z) = sin a sin c (cos b, sin b)
//
// a runs over [0, pi/2] in m = n/2 steps, c over [0, pi], b over [0, 2 pi).
// On the equator w = 0 only the half with canonical sign is kept. Grids are
// nested: the grid for 2n contains the grid for n.
template <std::size_t D>
class SphereGrid {
 public:
  explicit SphereGrid(int n) : n_(n) {
    if (n < 8 || n % 2 != 0)
      throw DomainError("sphere grid resolution must be an even integer >= 8, got " +
                        std::to_string(n));
    points_.reserve(expected_size(n));
    const int m = n / 2;
    const double h = std::numbers::pi / n;
    add(RealVector<D>{1.0});
    for (int i = 1; i < m; ++i) add_ring(std::cos(i * h), std::sin(i * h), /*half=*/false);
    add_ring(0.0, 1.0, /*half=*/true);
  }

  int resolution() const { return n_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<StrategyVec<D>>& points() const { return points_; }
  const StrategyVec<D>& operator[](std::size_t i) const { return points_[i]; }

  // Point count for resolution n (m = n/2):
  //   S^2: 1 + (m-1)*2n + n
  //   S^3: 1 + (m-1)*(2 + (n-1)*2n) + 1 + (m-1)*2n + n
  static std::size_t expected_size(int n) {
    const std::size_t nn = static_cast<std::size_t>(n), m = nn / 2;
    if constexpr (D == 3)
      return 1 + (m - 1) * 2 * nn + nn;
    else
      return 1 + (m - 1) * (2 + (nn - 1) * 2 * nn) + 1 + (m - 1) * 2 * nn + nn;
  }

 private:
  void add(RealVector<D> c) {
    // cos(pi/2) and friends leave ~1e-17 residue; keep exact zeros exact.
    for (double& x : c)
      if (std::abs(x) < 1e-15) x = 0.0;
    if constexpr (D == 3) {
      points_.push_back(canonicalize(StrategyVec3::normalized(c)));
    } else {
      points_.push_back(canonicalize(StrategyVec4::normalized(c)));
    }
  }

  // Circle of (y, z) with radius `rad` at fixed leading components.
  void add_circle(RealVector<D> base, double rad, int count) {
    const double h = std::numbers::pi / n_;
    for (int k = 0; k < count; ++k) {
      base[D - 2] = rad * std::cos(k * h);
      base[D - 1] = rad * std::sin(k * h);
      add(base);
    }
  }

  // All points with w = `w`, |rest| = `rad`. `half` keeps one of each +-pair
  // of the remaining sub-sphere (used on the equator w = 0).
  void add_ring(double w, double rad, bool half) {
    const double h = std::numbers::pi / n_;
    if constexpr (D == 3) {
      add_circle({w, 0.0, 0.0}, rad, half ? n_ : 2 * n_);
    } else {
      const int m = n_ / 2;
      const int last = half ? m : n_;
      add(RealVector<D>{w, rad, 0.0, 0.0});
      for (int j = 1; j < last; ++j)
        add_circle({w, rad * std::cos(j * h), 0.0, 0.0}, rad * std::sin(j * h), 2 * n_);
      if (half) {
        add_circle({w, 0.0, 0.0, 0.0}, rad, n_);
      } else {
        add(RealVector<D>{w, -rad, 0.0, 0.0});
      }
    }
  }

  int n_;
  std::vector<StrategyVec<D>> points_;
};

namespace detail {

// Runs body(i) for i in [0, count) over hardware threads. Each index writes
// only its own output slot, so results do not depend on scheduling. The first
// exception thrown by a worker (in worker order) is rethrown after joining.
template <typename Body>
void parallel_for(std::size_t count, Body body) {
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
  if (workers == 1 || count < 64) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk, end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &body, &err = errors[w]] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        err = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Max of v P v^T over the grid; ties go to the lexicographically smaller point.
template <std::size_t D>
std::size_t grid_argmax(const RealMatrix<D>& p, const SphereGrid<D>& grid) {
  std::size_t best = 0;
  double best_value = quadratic_form(p, grid[0].components());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = quadratic_form(p, grid[i].components());
    if (v > best_value || (v == best_value && grid[i] < grid[best])) {
      best = i;
      best_value = v;
    }
  }
  return best;
}

}  // namespace detail

template <std::size_t D>
struct GridResponse {
  StrategyVec<D> strategy;
  double payoff;
};

template <std::size_t D>
GridResponse<D> grid_best_response(const PayoffTensor<D>& tensor, const StrategyVec<D>& u,
                                   const SphereGrid<D>& grid) {
  const auto p = response_matrix(tensor, u);
  const std::size_t i = detail::grid_argmax(p.m, grid);
  return {grid[i], p.payoff(grid[i])};
}

template <std::size_t D>
GridResponse<D> grid_best_response(const PayoffTensor<D>& tensor, const StrategyVec<D>& u,
                                   int n) {
  return grid_best_response(tensor, u, SphereGrid<D>(n));
}

// Scan tolerance tied to the grid resolution. Every unit vector lies within
// angle h = pi/n of a grid point, and v P v^T drops by at most
// (lambda_max - lambda_min) sin^2(h) <= (t - s) h^2 there, so an exact
// equilibrium is never missed for lack of resolution.
inline double resolution_eps(const PayoffTable& table, int n) {
  const double h = std::numbers::pi / n;
  return (table.t() - table.s()) * h * h;
}

template <std::size_t D>
struct ScanProfile {
  StrategyVec<D> strategy_a;
  StrategyVec<D> strategy_b;
  Regret grid_regret;   // against the best grid reply
  Regret exact_regret;  // against the maximal eigenvalue
};

template <std::size_t D>
struct ScanResult {
  std::size_t grid_points = 0;
  double eps = 0.0;
  // Profiles meeting the eps condition against the grid alone.
  std::size_t grid_candidates = 0;
  // The subset that also meets it against the exact maximal eigenvalue.
  std::vector<ScanProfile<D>> profiles;
};

// All grid profiles (a, b) where neither player can gain more than eps by
// switching to another grid point. Candidates are then re-checked against
// the exact best-response payoff; only survivors are listed, in grid order.
template <std::size_t D>
ScanResult<D> grid_nash_scan(const PayoffTensor<D>& tensor, int n, double eps) {
  if (!(eps > 0.0)) throw DomainError("grid_nash_scan: eps must be positive");
  const SphereGrid<D> grid(n);
  const std::size_t count = grid.size();

  std::vector<RealMatrix<D>> response(count);
  std::vector<double> grid_max(count);
  detail::parallel_for(count, [&](std::size_t u) {
    response[u] = response_matrix(tensor, grid[u]).m;
    double best = -HUGE_VAL;
    for (std::size_t v = 0; v < count; ++v)
      best = std::max(best, quadratic_form(response[u], grid[v].components()));
    grid_max[u] = best;
  });

  // Alice candidates per Bob strategy b, collected per row so the merge
  // order is fixed.
  std::vector<std::vector<std::size_t>> partners(count);
  detail::parallel_for(count, [&](std::size_t b) {
    for (std::size_t a = 0; a < count; ++a) {
      const double regret_a = grid_max[b] - quadratic_form(response[b], grid[a].components());
      if (regret_a > eps) continue;
      const double regret_b = grid_max[a] - quadratic_form(response[a], grid[b].components());
      if (regret_b > eps) continue;
      partners[b].push_back(a);
    }
  });

  ScanResult<D> result;
  result.grid_points = count;
  result.eps = eps;
  for (std::size_t b = 0; b < count; ++b) {
    for (std::size_t a : partners[b]) {
      ++result.grid_candidates;
      const Regret grid_regret{
          grid_max[b] - quadratic_form(response[b], grid[a].components()),
          grid_max[a] - quadratic_form(response[a], grid[b].components())};
      const Regret exact = nash_regret(tensor, grid[a], grid[b]);
      if (exact.a <= eps && exact.b <= eps)
        result.profiles.push_back({grid[a], grid[b], grid_regret, exact});
    }
  }
  return result;
}

}  // namespace qpd
