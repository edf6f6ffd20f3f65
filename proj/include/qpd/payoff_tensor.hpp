#pragma once

// Payoff tensors $_{ij,kl} and response matrices P(u).
//
// A player's payoff is sum_{ijkl} $_{ij,kl} v^i v^j u^k u^l for own strategy v
// against opponent strategy u. With the tensor symmetric in (i,j) and in (k,l)
// it is unique, and the same tensor serves both players. Contracting the
// opponent's indices gives the symmetric response matrix
// P(u)_ij = sum_kl $_{ij,kl} u^k u^l, so the payoff is v P(u) v^T.

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "qpd/errors.hpp"
#include "qpd/linalg.hpp"
#include "qpd/quantum_core.hpp"
#include "qpd/strategy_space.hpp"

namespace qpd {

// One tensor element with 1-based indices, as listed in the closed-form
// tables and as dumped by the CLI.
struct TensorEntry {
  int i, j, k, l;
  double value;
};

template <std::size_t D>
class PayoffTensor {
 public:
  static constexpr std::size_t kDim = D;

  // Expands each representative to its orbit
  // {$_{ij,kl}, $_{ji,kl}, $_{ij,lk}, $_{ji,lk}}; every other element is 0.
  // Two representatives that reach the same element with different values
  // raise ConsistencyError.
  static PayoffTensor from_representatives(const PayoffTable& table,
                                           const Entanglement& gamma,
                                           std::initializer_list<TensorEntry> reps) {
    PayoffTensor out(table, gamma);
    std::array<bool, kSize> set{};
    for (const TensorEntry& e : reps) {
      for (int idx : {e.i, e.j, e.k, e.l})
        if (idx < 1 || idx > static_cast<int>(D))
          throw ValidationError("tensor index " + std::to_string(idx) +
                                " out of range 1.." + std::to_string(D));
      const std::array<std::array<int, 2>, 2> left{{{e.i, e.j}, {e.j, e.i}}};
      const std::array<std::array<int, 2>, 2> right{{{e.k, e.l}, {e.l, e.k}}};
      for (const auto& ij : left)
        for (const auto& kl : right) {
          const std::size_t pos = offset(ij[0] - 1, ij[1] - 1, kl[0] - 1, kl[1] - 1);
          if (set[pos] && out.e_[pos] != e.value)
            throw ConsistencyError("conflicting values for tensor element $_{" +
                                   std::to_string(ij[0]) + std::to_string(ij[1]) + "," +
                                   std::to_string(kl[0]) + std::to_string(kl[1]) + "}");
          out.e_[pos] = e.value;
          set[pos] = true;
        }
    }
    return out;
  }

  // 0-based element access.
  double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return e_[offset(i, j, k, l)];
  }

  const PayoffTable& table() const { return table_; }
  double gamma() const { return gamma_; }

  // Nonzero elements in lexicographic (i, j, k, l) order, 1-based.
  std::vector<TensorEntry> nonzero_entries() const {
    std::vector<TensorEntry> out;
    for (std::size_t i = 0; i < D; ++i)
      for (std::size_t j = 0; j < D; ++j)
        for (std::size_t k = 0; k < D; ++k)
          for (std::size_t l = 0; l < D; ++l)
            if (const double v = (*this)(i, j, k, l); v != 0.0)
              out.push_back({static_cast<int>(i + 1), static_cast<int>(j + 1),
                             static_cast<int>(k + 1), static_cast<int>(l + 1), v});
    return out;
  }

 private:
  static constexpr std::size_t kSize = D * D * D * D;

  static constexpr std::size_t offset(std::size_t i, std::size_t j, std::size_t k,
                                      std::size_t l) {
    return ((i * D + j) * D + k) * D + l;
  }

  PayoffTensor(const PayoffTable& table, const Entanglement& gamma)
      : table_(table), gamma_(gamma.gamma()) {}

  PayoffTable table_;
  double gamma_;
  std::array<double, kSize> e_{};
};

// Full SU(2) strategy space, indices 1..4 = (w, x, y, z).
inline PayoffTensor<4> build_tensor_full(const PayoffTable& table,
                                         const Entanglement& gamma) {
  const double r = table.r(), p = table.p(), t = table.t(), s = table.s();
  const double e = gamma.sin_sq();
  const double sg = std::sin(gamma.gamma());
  return PayoffTensor<4>::from_representatives(
      table, gamma,
      {
          {1, 1, 1, 1, r},
          {4, 4, 4, 4, r},
          {1, 1, 3, 3, s},
          {4, 4, 2, 2, s},
          {2, 2, 2, 2, p},
          {3, 3, 3, 3, p},
          {2, 2, 4, 4, t},
          {3, 3, 1, 1, t},
          {1, 1, 2, 2, s + (t - s) * e},
          {4, 4, 3, 3, s + (t - s) * e},
          {1, 1, 4, 4, r + (p - r) * e},
          {4, 4, 1, 1, r + (p - r) * e},
          {2, 2, 1, 1, t + (s - t) * e},
          {3, 3, 4, 4, t + (s - t) * e},
          {2, 2, 3, 3, p + (r - p) * e},
          {3, 3, 2, 2, p + (r - p) * e},
          {1, 2, 1, 3, 0.5 * (s - r) * sg},
          {3, 4, 2, 4, -0.5 * (s - r) * sg},
          {1, 2, 2, 4, 0.5 * (t - p) * sg},
          {3, 4, 1, 3, -0.5 * (t - p) * sg},
          {1, 3, 1, 2, 0.5 * (t - r) * sg},
          {2, 4, 3, 4, -0.5 * (t - r) * sg},
          {1, 3, 3, 4, 0.5 * (p - s) * sg},
          {2, 4, 1, 2, -0.5 * (p - s) * sg},
          {1, 4, 1, 4, 0.5 * (p - r) * e},
          {2, 3, 2, 3, -0.5 * (p - r) * e},
          {1, 4, 2, 3, 0.5 * (s - t) * e},
          {2, 3, 1, 4, -0.5 * (s - t) * e},
      });
}

// Two-parameter space (x = 0), indices 1..3 = (w, y, z).
inline PayoffTensor<3> build_tensor_twoparam(const PayoffTable& table,
                                             const Entanglement& gamma) {
  const double r = table.r(), p = table.p(), t = table.t(), s = table.s();
  const double e = gamma.sin_sq();
  const double sg = std::sin(gamma.gamma());
  return PayoffTensor<3>::from_representatives(
      table, gamma,
      {
          {1, 1, 1, 1, r},
          {3, 3, 3, 3, r},
          {1, 1, 2, 2, s},
          {2, 2, 2, 2, p},
          {2, 2, 1, 1, t},
          {3, 3, 2, 2, s + (t - s) * e},
          {1, 1, 3, 3, r + (p - r) * e},
          {3, 3, 1, 1, r + (p - r) * e},
          {2, 2, 3, 3, t + (s - t) * e},
          {1, 3, 1, 3, 0.5 * (p - r) * e},
          {2, 3, 1, 2, 0.5 * (p - t) * sg},
          {1, 2, 2, 3, 0.5 * (p - s) * sg},
      });
}

template <std::size_t D>
PayoffTensor<D> build_tensor(const PayoffTable& table, const Entanglement& gamma) {
  if constexpr (D == 4)
    return build_tensor_full(table, gamma);
  else
    return build_tensor_twoparam(table, gamma);
}

template <std::size_t D>
struct ResponseMatrix {
  RealMatrix<D> m;
  StrategyVec<D> against;

  double operator()(std::size_t i, std::size_t j) const { return m(i, j); }
  // Payoff of own strategy v against `against`.
  double payoff(const StrategyVec<D>& v) const {
    return quadratic_form(m, v.components());
  }
};

// P(u)_ij = sum_kl $_{ij,kl} u^k u^l. Exactly symmetric: P_ij and P_ji sum
// identical terms in identical order.
template <std::size_t D>
ResponseMatrix<D> response_matrix(const PayoffTensor<D>& tensor, const StrategyVec<D>& u) {
  ResponseMatrix<D> out{RealMatrix<D>{}, u};
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = 0; j < D; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < D; ++k)
        for (std::size_t l = 0; l < D; ++l) acc += tensor(i, j, k, l) * u[k] * u[l];
      out.m(i, j) = acc;
    }
  return out;
}

template <std::size_t D>
PayoffPair payoff_via_tensor(const PayoffTensor<D>& tensor, const StrategyVec<D>& u_a,
                             const StrategyVec<D>& u_b) {
  return {response_matrix(tensor, u_b).payoff(u_a),
          response_matrix(tensor, u_a).payoff(u_b)};
}

}  // namespace qpd
