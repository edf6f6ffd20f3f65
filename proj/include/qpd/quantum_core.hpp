#pragma once

// Direct simulation of the two-qubit quantized Prisoners' Dilemma.
//
// Basis order is (CC, CD, DC, DD) with Alice's qubit first; |C> = (1, 0) and
// |D> = (0, 1). The final state is J^dagger (U_A x U_B) J |CC>.

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "qpd/errors.hpp"
#include "qpd/linalg.hpp"
#include "qpd/strategy_space.hpp"
#include "qpd/unitary.hpp"

namespace qpd {

// Classical payoffs. Alice's view: (C,C) -> r, (C,D) -> s, (D,C) -> t,
// (D,D) -> p. Requires t > r > p > s.
class PayoffTable {
 public:
  // Argument order follows the usual (r, p, t, s) listing.
  static PayoffTable make(double r, double p, double t, double s) {
    auto fail = [&](const char* rule) {
      std::ostringstream msg;
      msg << "payoff table violates " << rule << " (r=" << r << ", p=" << p
          << ", t=" << t << ", s=" << s << "); need t > r > p > s";
      throw ValidationError(msg.str());
    };
    if (!(std::isfinite(r) && std::isfinite(p) && std::isfinite(t) &&
          std::isfinite(s)))
      fail("finiteness");
    if (!(t > r)) fail("t > r");
    if (!(r > p)) fail("r > p");
    if (!(p > s)) fail("p > s");
    return PayoffTable(r, p, t, s);
  }

  double r() const { return r_; }
  double p() const { return p_; }
  double t() const { return t_; }
  double s() const { return s_; }

  friend bool operator==(const PayoffTable&, const PayoffTable&) = default;

 private:
  PayoffTable(double r, double p, double t, double s)
      : r_(r), p_(p), t_(t), s_(s) {}
  double r_, p_, t_, s_;
};

// Entangling angle gamma in [0, pi/2], radians.
class Entanglement {
 public:
  static Entanglement make(double gamma) {
    if (!(gamma >= 0.0 && gamma <= std::numbers::pi / 2))
      throw DomainError("gamma must lie in [0, pi/2], got " + std::to_string(gamma));
    return Entanglement(gamma);
  }
  static Entanglement from_degrees(double degrees) {
    return make(degrees / 180.0 * std::numbers::pi);
  }

  double gamma() const { return gamma_; }
  double sin_sq() const {
    const double s = std::sin(gamma_);
    return s * s;
  }

 private:
  explicit Entanglement(double gamma) : gamma_(gamma) {}
  double gamma_;
};

enum Outcome : std::size_t { kCC = 0, kCD = 1, kDC = 2, kDD = 3 };

struct GameState {
  std::array<Complex, 4> amp{};

  double probability(Outcome o) const { return std::norm(amp[o]); }
  double norm_sq() const {
    double n = 0.0;
    for (const auto& a : amp) n += std::norm(a);
    return n;
  }
  std::array<double, 4> probabilities() const {
    return {probability(kCC), probability(kCD), probability(kDC), probability(kDD)};
  }
};

struct PayoffPair {
  double payoff_a = 0.0;
  double payoff_b = 0.0;
};

// J = cos(gamma/2) C x C + i sin(gamma/2) D x D, with C = I and D = i*sigma_y.
inline Mat4c entangling_gate(const Entanglement& gamma) {
  const Mat2c d = unitary_from_vec4(to_vec4(defect<3>())).matrix();
  const double half = gamma.gamma() / 2;
  return std::cos(half) * Mat4c::identity() +
         Complex(0.0, std::sin(half)) * kron(d, d);
}

inline GameState final_state(const Unitary2& u_a, const Unitary2& u_b,
                             const Entanglement& gamma) {
  const Mat4c j = entangling_gate(gamma);
  const Mat4c evolution = adjoint(j) * kron(u_a.matrix(), u_b.matrix()) * j;
  GameState out;
  for (std::size_t i = 0; i < 4; ++i) out.amp[i] = evolution(i, kCC);
  return out;
}

// Final-state amplitudes written out as polynomials in the strategy
// components; the matrix route in final_state() is its independent check.
inline GameState closed_form_final_state(const StrategyVec4& u_a,
                                         const StrategyVec4& u_b,
                                         const Entanglement& gamma) {
  const double a1 = u_a[0], a2 = u_a[1], a3 = u_a[2], a4 = u_a[3];
  const double b1 = u_b[0], b2 = u_b[1], b3 = u_b[2], b4 = u_b[3];
  const double c = std::cos(gamma.gamma()), s = std::sin(gamma.gamma());
  GameState out;
  out.amp[kCC] = Complex((a1 * b1 - a4 * b4) - (a3 * b2 + a2 * b3) * s,
                         (a4 * b1 + a1 * b4) * c);
  out.amp[kCD] = Complex(-(a1 * b3 + a4 * b2) + (a3 * b4 - a2 * b1) * s,
                         (a1 * b2 - a4 * b3) * c);
  out.amp[kDC] = Complex(-(a3 * b1 + a2 * b4) + (a4 * b3 - a1 * b2) * s,
                         (a2 * b1 - a3 * b4) * c);
  out.amp[kDD] = Complex((a3 * b3 - a2 * b2) + (a4 * b1 + a1 * b4) * s,
                         -(a3 * b2 + a2 * b3) * c);
  return out;
}

inline constexpr double kStateNormTolerance = 1e-9;

// Does not renormalize: an unnormalized state is an upstream bug.
inline PayoffPair expected_payoffs(const GameState& state, const PayoffTable& table) {
  const double n2 = state.norm_sq();
  if (std::abs(n2 - 1.0) > kStateNormTolerance)
    throw ValidationError("game state is not normalized (|psi|^2 = " +
                          std::to_string(n2) + ")");
  const auto pr = state.probabilities();
  return {table.r() * pr[kCC] + table.p() * pr[kDD] + table.t() * pr[kDC] +
              table.s() * pr[kCD],
          table.r() * pr[kCC] + table.p() * pr[kDD] + table.s() * pr[kDC] +
              table.t() * pr[kCD]};
}

// Payoffs by simulation for strategies from either space.
template <std::size_t D>
PayoffPair simulate_payoffs(const StrategyVec<D>& u_a, const StrategyVec<D>& u_b,
                            const PayoffTable& table, const Entanglement& gamma) {
  return expected_payoffs(final_state(unitary_from_vec4(to_vec4(u_a)),
                                      unitary_from_vec4(to_vec4(u_b)), gamma),
                          table);
}

}  // namespace qpd
