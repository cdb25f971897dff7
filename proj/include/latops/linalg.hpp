#pragma once

#include <optional>
#include <vector>

#include "latops/matrix.hpp"

namespace latops {

/// In-place reduced row echelon form. Returns the pivot columns, ascending.
inline std::vector<std::size_t> rref(RatMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && m(piv, col) == 0) ++piv;
    if (piv == m.rows()) continue;
    m.swap_rows(row, piv);
    const Rational inv = 1 / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      const Rational f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t rank(RatMatrix m) { return rref(m).size(); }

/// Basis of the right nullspace {x : m·x = 0}.
///
/// Normalization: the basis, stacked as rows, is itself in reduced row
/// echelon form. Each vector's first nonzero entry is 1, those leading
/// positions strictly increase, and every leading position is zero in the
/// other vectors. For [[1,2],[2,4]] this gives {(1,-1/2)}.
inline std::vector<RatVector> rational_nullspace(const RatMatrix& m) {
  RatMatrix r = m;
  const auto pivots = rref(r);
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;

  std::vector<RatVector> raw;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    RatVector v(n, Rational(0));
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(i, f);
    raw.push_back(std::move(v));
  }
  if (raw.empty()) return raw;

  RatMatrix basis(raw.size(), n);
  for (std::size_t i = 0; i < raw.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) basis(i, j) = raw[i][j];
  rref(basis);
  std::vector<RatVector> out(raw.size(), RatVector(n));
  for (std::size_t i = 0; i < raw.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) out[i][j] = basis(i, j);
  return out;
}

/// One solution of m·x = b with every free coordinate set to zero, or
/// nullopt when the system is inconsistent.
inline std::optional<RatVector> solve_particular(const RatMatrix& m, const RatVector& b) {
  if (b.size() != m.rows()) throw ValidationError("right-hand side length mismatch");
  RatMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  const auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  RatVector x(m.cols(), Rational(0));
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, m.cols());
  return x;
}

inline RatVector mat_vec(const RatMatrix& m, const RatVector& x) {
  RatVector out(m.rows(), Rational(0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * x[j];
  return out;
}

/// Determinant by Gaussian elimination; the empty matrix has determinant 1.
inline Rational determinant(RatMatrix m) {
  if (!m.is_square()) throw ValidationError("determinant of a non-square matrix");
  Rational det = 1;
  const std::size_t n = m.rows();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m(piv, k) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      m.swap_rows(piv, k);
      det = -det;
    }
    det *= m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m(i, k) == 0) continue;
      const Rational f = m(i, k) / m(k, k);
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return det;
}

/// Fraction-free (Bareiss) determinant over Q[z]. Every division is exact.
inline Poly bareiss_determinant(PolyMatrix m) {
  if (!m.is_square()) throw ValidationError("determinant of a non-square polynomial matrix");
  const std::size_t n = m.rows();
  if (n == 0) return Poly(1);
  bool negate = false;
  Poly prev(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k).is_zero()) {
      std::size_t piv = k + 1;
      while (piv < n && m(piv, k).is_zero()) ++piv;
      if (piv == n) return Poly{};
      m.swap_rows(k, piv);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        m(i, j) = exact_divide(m(i, j) * m(k, k) - m(i, k) * m(k, j), prev);
      m(i, k) = Poly{};
    }
    prev = m(k, k);
  }
  Poly det = m(n - 1, n - 1);
  return negate ? -det : det;
}

struct DetAdjugate {
  Poly det;
  PolyMatrix adjugate;
};

/// Determinant and adjugate (transposed cofactor matrix), so that
/// m·adjugate = adjugate·m = det·I.
inline DetAdjugate poly_matrix_det_adjugate(const PolyMatrix& m) {
  if (!m.is_square()) throw ValidationError("adjugate of a non-square polynomial matrix");
  const std::size_t n = m.rows();
  DetAdjugate out{bareiss_determinant(m), PolyMatrix(n, n)};
  if (n == 1) {
    out.adjugate(0, 0) = Poly(1);
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Poly c = bareiss_determinant(m.minor(j, i));
      out.adjugate(i, j) = ((i + j) % 2) ? -c : c;
    }
  }
  return out;
}

}  // namespace latops
