#pragma once

#include <string>

#include "qpd/errors.hpp"
#include "qpd/linalg.hpp"

namespace qpd {

inline constexpr double kUnitaryTolerance = 1e-12;

// A validated element of SU(2). Construction checks U U^dagger = I and
// det U = 1; the held matrix is never modified afterwards.
class Unitary2 {
 public:
  static Unitary2 from_matrix(const Mat2c& m,
                              double tolerance = kUnitaryTolerance) {
    const double unitarity = max_abs_diff(m * adjoint(m), Mat2c::identity());
    if (unitarity > tolerance)
      throw ValidationError("matrix is not unitary (max |U U^dagger - I| = " +
                            std::to_string(unitarity) + ")");
    const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    if (std::abs(det - 1.0) > tolerance)
      throw ValidationError("matrix is not special unitary (|det U - 1| = " +
                            std::to_string(std::abs(det - 1.0)) + ")");
    return Unitary2(m);
  }

  static Unitary2 identity() { return Unitary2(Mat2c::identity()); }

  const Mat2c& matrix() const { return m_; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return m_(i, j);
  }

 private:
  explicit Unitary2(const Mat2c& m) : m_(m) {}
  Mat2c m_;
};

}  // namespace qpd
