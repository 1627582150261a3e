#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "netcode/errors.hpp"
#include "netcode/field.hpp"
#include "netcode/polynomial.hpp"

namespace netcode {

/// Dense row-major matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  const std::vector<T>& data() const { return data_; }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix out(nr, nc, nr && nc ? (*this)(r0, c0) : T{});
    for (std::size_t r = 0; r < nr; ++r) {
      for (std::size_t c = 0; c < nc; ++c) out(r, c) = (*this)(r0 + r, c0 + c);
    }
    return out;
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Scalar operations over polynomials with coefficients in GF(2^k).
struct PolyOps {
  using Scalar = Poly;
  unsigned k = 1;
  Poly zero() const { return Poly(k); }
  Poly one() const { return Poly::one(k); }
  Poly add(const Poly& a, const Poly& b) const { return a + b; }
  Poly mul(const Poly& a, const Poly& b) const { return a * b; }
  bool is_zero(const Poly& a) const { return a.is_zero(); }
};

/// Scalar operations over GF(2^k) elements.
struct FieldOps {
  using Scalar = GF2k::Elem;
  GF2k field{1};
  Scalar zero() const { return 0; }
  Scalar one() const { return 1; }
  Scalar add(Scalar a, Scalar b) const { return a ^ b; }
  Scalar mul(Scalar a, Scalar b) const { return field.mul(a, b); }
  bool is_zero(Scalar a) const { return a == 0; }
};

template <class Ops>
Matrix<typename Ops::Scalar> identity(std::size_t n, const Ops& ops) {
  Matrix<typename Ops::Scalar> m(n, n, ops.zero());
  for (std::size_t i = 0; i < n; ++i) m(i, i) = ops.one();
  return m;
}

template <class Ops>
Matrix<typename Ops::Scalar> matmul(const Matrix<typename Ops::Scalar>& a,
                                    const Matrix<typename Ops::Scalar>& b, const Ops& ops) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("matrix product " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " * " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
  }
  Matrix<typename Ops::Scalar> out(a.rows(), b.cols(), ops.zero());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (ops.is_zero(a(i, k))) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (ops.is_zero(b(k, j))) continue;
        out(i, j) = ops.add(out(i, j), ops.mul(a(i, k), b(k, j)));
      }
    }
  }
  return out;
}

template <class Ops>
Matrix<typename Ops::Scalar> matadd(const Matrix<typename Ops::Scalar>& a,
                                    const Matrix<typename Ops::Scalar>& b, const Ops& ops) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("matrix sum of different shapes");
  }
  Matrix<typename Ops::Scalar> out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = ops.add(a(i, j), b(i, j));
  }
  return out;
}

template <class Ops>
bool is_zero_matrix(const Matrix<typename Ops::Scalar>& a, const Ops& ops) {
  for (const auto& x : a.data()) {
    if (!ops.is_zero(x)) return false;
  }
  return true;
}

/// Determinant by cofactor expansion along the first row. Only meant for
/// the small symbolic matrices the decomposition works with.
inline Poly determinant(const Matrix<Poly>& a, unsigned k = 1) {
  if (a.rows() != a.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return Poly::one(k);
  if (n == 1) return a(0, 0);
  if (n == 2) return a(0, 0) * a(1, 1) + a(0, 1) * a(1, 0);
  Poly det(k);
  for (std::size_t c = 0; c < n; ++c) {
    if (a(0, c).is_zero()) continue;
    Matrix<Poly> minor(n - 1, n - 1, Poly(k));
    for (std::size_t r = 1; r < n; ++r) {
      for (std::size_t cc = 0, m = 0; cc < n; ++cc) {
        if (cc != c) minor(r - 1, m++) = a(r, cc);
      }
    }
    det += a(0, c) * determinant(minor, k);  // signs vanish in characteristic 2
  }
  return det;
}

/// Determinant over GF(2^k) by Gaussian elimination.
inline GF2k::Elem determinant(Matrix<GF2k::Elem> a, const GF2k& f) {
  if (a.rows() != a.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  GF2k::Elem det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
    }
    det = f.mul(det, a(c, c));
    const GF2k::Elem inv = f.inv(a(c, c));
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a(r, c) == 0) continue;
      const GF2k::Elem factor = f.mul(a(r, c), inv);
      for (std::size_t j = c; j < n; ++j) a(r, j) ^= f.mul(factor, a(c, j));
    }
  }
  return det;
}

/// Expands a matrix of v x v blocks into one scalar matrix.
template <class T>
Matrix<T> flatten(const Matrix<Matrix<T>>& blocks, std::size_t v, const T& zero) {
  Matrix<T> out(blocks.rows() * v, blocks.cols() * v, zero);
  for (std::size_t i = 0; i < blocks.rows(); ++i) {
    for (std::size_t j = 0; j < blocks.cols(); ++j) {
      const auto& b = blocks(i, j);
      for (std::size_t r = 0; r < v; ++r) {
        for (std::size_t c = 0; c < v; ++c) out(i * v + r, j * v + c) = b(r, c);
      }
    }
  }
  return out;
}

}  // namespace netcode
