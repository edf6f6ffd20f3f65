#pragma once

// Strategies as real unit vectors.
//
// An SU(2) strategy U = w*I + x*i*sigma_x + y*i*sigma_y + z*i*sigma_z is held
// as (w, x, y, z) in R^4. The two-parameter family U(theta, phi) has x = 0 and
// is held as (w, y, z) in R^3. U and -U describe the same strategy;
// canonicalize() picks one representative.

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "qpd/errors.hpp"
#include "qpd/linalg.hpp"
#include "qpd/unitary.hpp"

namespace qpd {

inline constexpr double kUnitNormTolerance = 1e-12;
// Components at or below this magnitude are treated as zero when choosing
// the canonical sign.
inline constexpr double kCanonicalZeroTolerance = 1e-10;

template <std::size_t D>
class StrategyVec {
  static_assert(D == 3 || D == 4, "strategies live in R^3 or R^4");

 public:
  static constexpr std::size_t kDim = D;

  // Throws ValidationError unless |c|^2 = 1 within kUnitNormTolerance.
  static StrategyVec make(const RealVector<D>& c) {
    const double n2 = dot(c, c);
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kUnitNormTolerance)
      throw ValidationError("strategy vector is not a unit vector (|u|^2 = " +
                            std::to_string(n2) + ")");
    return StrategyVec(c);
  }

  // Scales c onto the sphere. Throws ValidationError for the zero vector.
  static StrategyVec normalized(const RealVector<D>& c) {
    const double n = norm(c);
    if (!std::isfinite(n) || n == 0.0)
      throw ValidationError("cannot normalize a zero strategy vector");
    RealVector<D> out;
    for (std::size_t i = 0; i < D; ++i) out[i] = c[i] / n;
    return StrategyVec(out);
  }

  double operator[](std::size_t i) const { return c_[i]; }
  const RealVector<D>& components() const { return c_; }

  friend bool operator==(const StrategyVec&, const StrategyVec&) = default;
  friend auto operator<=>(const StrategyVec& a, const StrategyVec& b) {
    return a.c_ <=> b.c_;
  }

 private:
  explicit StrategyVec(const RealVector<D>& c) : c_(c) {}
  RealVector<D> c_;
};

using StrategyVec3 = StrategyVec<3>;
using StrategyVec4 = StrategyVec<4>;

// theta in [0, pi], phi in [0, pi/2].
class StrategyAngles {
 public:
  static StrategyAngles make(double theta, double phi) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi))
      throw DomainError("theta must lie in [0, pi], got " + std::to_string(theta));
    if (!(phi >= 0.0 && phi <= std::numbers::pi / 2))
      throw DomainError("phi must lie in [0, pi/2], got " + std::to_string(phi));
    return StrategyAngles(theta, phi);
  }
  double theta() const { return theta_; }
  double phi() const { return phi_; }

 private:
  StrategyAngles(double theta, double phi) : theta_(theta), phi_(phi) {}
  double theta_;
  double phi_;
};

// Named strategies: C (identity), D = U(pi, 0) = i*sigma_y, Q = U(0, pi/2) = i*sigma_z.
template <std::size_t D>
StrategyVec<D> cooperate() {
  RealVector<D> c{};
  c[0] = 1.0;
  return StrategyVec<D>::make(c);
}

template <std::size_t D>
StrategyVec<D> defect() {
  RealVector<D> c{};
  c[D == 4 ? 2 : 1] = 1.0;
  return StrategyVec<D>::make(c);
}

template <std::size_t D>
StrategyVec<D> quantum() {
  RealVector<D> c{};
  c[D - 1] = 1.0;
  return StrategyVec<D>::make(c);
}

template <std::size_t D>
RealVector<D> canonicalize(const RealVector<D>& u,
                           double zero_tol = kCanonicalZeroTolerance) {
  for (std::size_t i = 0; i < D; ++i) {
    if (std::abs(u[i]) > zero_tol) {
      if (u[i] > 0.0) return u;
      RealVector<D> out;
      for (std::size_t k = 0; k < D; ++k) out[k] = -u[k];
      return out;
    }
  }
  throw ValidationError("cannot canonicalize a zero vector");
}

// Flips the sign so the first nonzero component is positive. Idempotent.
template <std::size_t D>
StrategyVec<D> canonicalize(const StrategyVec<D>& u,
                            double zero_tol = kCanonicalZeroTolerance) {
  return StrategyVec<D>::make(canonicalize(u.components(), zero_tol));
}

// w*I + x*i*sigma_x + y*i*sigma_y + z*i*sigma_z
inline Unitary2 unitary_from_vec4(const StrategyVec4& u) {
  const double w = u[0], x = u[1], y = u[2], z = u[3];
  Mat2c m;
  m(0, 0) = Complex(w, z);
  m(0, 1) = Complex(y, x);
  m(1, 0) = Complex(-y, x);
  m(1, 1) = Complex(w, -z);
  return Unitary2::from_matrix(m);
}

// Inverse of unitary_from_vec4, returned in canonical sign.
inline StrategyVec4 vec4_from_unitary(const Unitary2& u) {
  const RealVector<4> c{u(0, 0).real(), u(0, 1).imag(), u(0, 1).real(),
                        u(0, 0).imag()};
  return canonicalize(StrategyVec4::make(c));
}

// The two-parameter strategy matrix built directly from the angles.
inline Unitary2 unitary_from_angles(const StrategyAngles& a) {
  const double c = std::cos(a.theta() / 2), s = std::sin(a.theta() / 2);
  Mat2c m;
  m(0, 0) = std::polar(c, a.phi());
  m(0, 1) = s;
  m(1, 0) = -s;
  m(1, 1) = std::polar(c, -a.phi());
  return Unitary2::from_matrix(m);
}

inline StrategyVec3 vec3_from_angles(const StrategyAngles& a) {
  const double c = std::cos(a.theta() / 2);
  return StrategyVec3::make(
      {c * std::cos(a.phi()), std::sin(a.theta() / 2), c * std::sin(a.phi())});
}

inline StrategyVec4 embed_vec3(const StrategyVec3& u) {
  return StrategyVec4::make({u[0], 0.0, u[1], u[2]});
}

template <std::size_t D>
StrategyVec4 to_vec4(const StrategyVec<D>& u) {
  if constexpr (D == 4)
    return u;
  else
    return embed_vec3(u);
}

namespace detail {

inline std::string format_g(double v, int digits = 12) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Shortest text that reads back as the same double.
inline std::string format_shortest(double v) {
  if (v == 0.0) v = 0.0;
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::vector<double> parse_numbers(std::string_view text,
                                         std::string_view literal) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view item =
        text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    double value = 0.0;
    const char* first = item.data();
    const char* last = item.data() + item.size();
    while (first < last && *first == ' ') ++first;
    while (last > first && last[-1] == ' ') --last;
    if (first < last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last)
      throw ValidationError("bad number '" + std::string(item) +
                            "' in '" + std::string(literal) + "'");
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace detail

// Parses a CLI strategy literal: C, D, Q, vec3:w,y,z, vec4:w,x,y,z or
// angles:theta,phi (radians unless `degrees`). Literals of the other space are
// converted when exact: vec3/angles embed into R^4, vec4 with x = 0 projects
// into R^3.
template <std::size_t D>
StrategyVec<D> parse_strategy(std::string_view literal, bool degrees = false) {
  if (literal == "C") return cooperate<D>();
  if (literal == "D") return defect<D>();
  if (literal == "Q") return quantum<D>();

  const std::size_t colon = literal.find(':');
  if (colon == std::string_view::npos)
    throw ValidationError("unknown strategy literal '" + std::string(literal) +
                          "' (expected C, D, Q, vec3:, vec4: or angles:)");
  const std::string_view kind = literal.substr(0, colon);
  const auto nums = detail::parse_numbers(literal.substr(colon + 1), literal);
  auto expect = [&](std::size_t n) {
    if (nums.size() != n)
      throw ValidationError("strategy literal '" + std::string(literal) +
                            "' needs " + std::to_string(n) + " components");
  };

  StrategyVec3 v3 = cooperate<3>();
  if (kind == "vec4") {
    expect(4);
    const auto v4 = StrategyVec4::make({nums[0], nums[1], nums[2], nums[3]});
    if constexpr (D == 4) {
      return v4;
    } else {
      if (v4[1] != 0.0)
        throw ValidationError("vec4 literal with nonzero x is outside the two-parameter space");
      return StrategyVec3::make({v4[0], v4[2], v4[3]});
    }
  } else if (kind == "vec3") {
    expect(3);
    v3 = StrategyVec3::make({nums[0], nums[1], nums[2]});
  } else if (kind == "angles") {
    expect(2);
    const double scale = degrees ? std::numbers::pi / 180.0 : 1.0;
    v3 = vec3_from_angles(StrategyAngles::make(nums[0] * scale, nums[1] * scale));
  } else {
    throw ValidationError("unknown strategy literal kind '" + std::string(kind) + "'");
  }
  if constexpr (D == 4)
    return embed_vec3(v3);
  else
    return v3;
}

// Inverse of parse_strategy: named token when the vector is C, D or Q up to
// sign (within 1e-12), otherwise a vecN: literal in shortest round-trip form,
// so it parses back to the same unit vector.
template <std::size_t D>
std::string format_strategy(const StrategyVec<D>& u) {
  const auto c = canonicalize(u).components();
  if (max_abs_diff(c, cooperate<D>().components()) <= 1e-12) return "C";
  if (max_abs_diff(c, defect<D>().components()) <= 1e-12) return "D";
  if (max_abs_diff(c, quantum<D>().components()) <= 1e-12) return "Q";
  std::string out = D == 4 ? "vec4:" : "vec3:";
  for (std::size_t i = 0; i < D; ++i) {
    if (i) out += ',';
    out += detail::format_shortest(u[i]);
  }
  return out;
}

}  // namespace qpd
