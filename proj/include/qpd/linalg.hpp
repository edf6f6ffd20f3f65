#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <type_traits>

namespace qpd {

using Complex = std::complex<double>;

template <std::size_t N>
using RealVector = std::array<double, N>;

// Dense row-major matrix with compile-time shape.
template <typename T, std::size_t R, std::size_t C>
struct Matrix {
  std::array<T, R * C> data{};

  static constexpr std::size_t rows() { return R; }
  static constexpr std::size_t cols() { return C; }

  T& operator()(std::size_t i, std::size_t j) { return data[i * C + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data[i * C + j];
  }

  static Matrix identity() {
    static_assert(R == C);
    Matrix m;
    for (std::size_t i = 0; i < R; ++i) m(i, i) = T{1};
    return m;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

using Mat2c = Matrix<Complex, 2, 2>;
using Mat4c = Matrix<Complex, 4, 4>;

template <std::size_t D>
using RealMatrix = Matrix<double, D, D>;

template <typename T, std::size_t R, std::size_t K, std::size_t C>
Matrix<T, R, C> operator*(const Matrix<T, R, K>& a, const Matrix<T, K, C>& b) {
  Matrix<T, R, C> out;
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) {
      T acc{};
      for (std::size_t k = 0; k < K; ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  return out;
}

template <typename T, std::size_t R, std::size_t C>
Matrix<T, R, C> operator+(const Matrix<T, R, C>& a, const Matrix<T, R, C>& b) {
  Matrix<T, R, C> out;
  for (std::size_t n = 0; n < R * C; ++n) out.data[n] = a.data[n] + b.data[n];
  return out;
}

template <typename T, std::size_t R, std::size_t C, typename S>
  requires std::is_convertible_v<S, T>
Matrix<T, R, C> operator*(S scalar, const Matrix<T, R, C>& a) {
  Matrix<T, R, C> out;
  for (std::size_t n = 0; n < R * C; ++n) out.data[n] = T(scalar) * a.data[n];
  return out;
}

template <std::size_t R, std::size_t C>
Matrix<Complex, C, R> adjoint(const Matrix<Complex, R, C>& a) {
  Matrix<Complex, C, R> out;
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

// Kronecker product; row index of the result is 2*i + k for a(i, .) b(k, .).
inline Mat4c kron(const Mat2c& a, const Mat2c& b) {
  Mat4c out;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l)
          out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

template <typename T, std::size_t R, std::size_t C>
double max_abs_diff(const Matrix<T, R, C>& a, const Matrix<T, R, C>& b) {
  double worst = 0.0;
  for (std::size_t n = 0; n < R * C; ++n)
    worst = std::max(worst, static_cast<double>(std::abs(a.data[n] - b.data[n])));
  return worst;
}

template <std::size_t N>
double dot(const RealVector<N>& a, const RealVector<N>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) acc += a[i] * b[i];
  return acc;
}

template <std::size_t N>
double norm(const RealVector<N>& v) {
  return std::sqrt(dot(v, v));
}

template <std::size_t N>
double max_abs_diff(const RealVector<N>& a, const RealVector<N>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < N; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

// v * M * v^T for a square real matrix.
template <std::size_t D>
double quadratic_form(const RealMatrix<D>& m, const RealVector<D>& v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < D; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < D; ++j) row += m(i, j) * v[j];
    acc += v[i] * row;
  }
  return acc;
}

template <std::size_t D>
RealVector<D> apply(const RealMatrix<D>& m, const RealVector<D>& v) {
  RealVector<D> out{};
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = 0; j < D; ++j) out[i] += m(i, j) * v[j];
  return out;
}

}  // namespace qpd
