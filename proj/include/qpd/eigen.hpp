#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "qpd/errors.hpp"
#include "qpd/linalg.hpp"
#include "qpd/strategy_space.hpp"

namespace qpd {

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kJacobiOffDiagonalTolerance = 1e-12;
inline constexpr int kJacobiMaxSweeps = 30;

template <std::size_t D>
struct EigenPair {
  double value;
  StrategyVec<D> vector;  // unit, canonical sign
};

template <std::size_t D>
double off_diagonal_norm(const RealMatrix<D>& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = 0; j < D; ++j)
      if (i != j) acc += a(i, j) * a(i, j);
  return std::sqrt(acc);
}

// Full spectrum of a small symmetric matrix by cyclic Jacobi rotations,
// ascending by eigenvalue. Equal eigenvalues are ordered by their canonical
// eigenvectors so the output is deterministic.
template <std::size_t D>
std::array<EigenPair<D>, D> eigen_symmetric(const RealMatrix<D>& input) {
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = i + 1; j < D; ++j)
      if (std::abs(input(i, j) - input(j, i)) > kSymmetryTolerance)
        throw ValidationError("eigen_symmetric: matrix is not symmetric at (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");

  RealMatrix<D> a = input;
  RealMatrix<D> v = RealMatrix<D>::identity();

  int sweep = 0;
  for (; sweep < kJacobiMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) < kJacobiOffDiagonalTolerance) break;
    for (std::size_t p = 0; p + 1 < D; ++p) {
      for (std::size_t q = p + 1; q < D; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle that annihilates a(p, q).
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t r = 0; r < D; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p), arq = a(r, q);
          a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
          a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
        }
        for (std::size_t r = 0; r < D; ++r) {
          const double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = vrp - s * (vrq + tau * vrp);
          v(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }
  if (off_diagonal_norm(a) >= kJacobiOffDiagonalTolerance)
    throw ConsistencyError("Jacobi eigen-solver did not converge in " +
                           std::to_string(kJacobiMaxSweeps) + " sweeps");

  auto out = [&]<std::size_t... I>(std::index_sequence<I...>) {
    auto column = [&](std::size_t c) {
      RealVector<D> col;
      for (std::size_t r = 0; r < D; ++r) col[r] = v(r, c);
      return EigenPair<D>{a(c, c), canonicalize(StrategyVec<D>::normalized(col))};
    };
    return std::array<EigenPair<D>, D>{column(I)...};
  }(std::make_index_sequence<D>{});
  std::sort(out.begin(), out.end(), [](const EigenPair<D>& x, const EigenPair<D>& y) {
    if (x.value != y.value) return x.value < y.value;
    return x.vector < y.vector;
  });
  return out;
}

}  // namespace qpd
