#pragma once

// Test-only reference computations. Nothing here goes through the library's
// monomial recursions or elimination routines.

#include <algorithm>
#include <random>
#include <vector>

#include "latops/lattice.hpp"
#include "latops/matrix.hpp"
#include "latops/poly.hpp"
#include "latops/random.hpp"

namespace latops::testing {

/// Bell numbers by B_{n+1} = Σ_k C(n,k) B_k.
inline std::vector<Rational> bell_numbers(int count) {
  std::vector<Rational> b{Rational(1)};
  for (int n = 0; static_cast<int>(b.size()) < count; ++n) {
    Rational next = 0;
    for (int k = 0; k <= n; ++k) next += binomial(n, k) * b[static_cast<std::size_t>(k)];
    b.push_back(next);
  }
  b.resize(static_cast<std::size_t>(count));
  return b;
}

/// Laplace expansion along the first row.
inline Poly cofactor_determinant(const PolyMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return Poly(1);
  if (n == 1) return m(0, 0);
  Poly det;
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j).is_zero()) continue;
    Poly term = m(0, j) * cofactor_determinant(m.minor(0, j));
    det += (j % 2) ? -term : term;
  }
  return det;
}

inline Rational cofactor_determinant(const RatMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  Rational det = 0;
  for (std::size_t j = 0; j < n; ++j) {
    Rational term = m(0, j) * cofactor_determinant(m.minor(0, j));
    det += (j % 2) ? Rational(-term) : term;
  }
  return det;
}

/// Rank as the largest k with a nonzero k×k minor, by exhaustive search.
inline std::size_t minor_rank(const RatMatrix& m) {
  for (std::size_t k = std::min(m.rows(), m.cols()); k >= 1; --k) {
    std::vector<bool> rsel(m.rows(), false), csel(m.cols(), false);
    std::fill(rsel.begin(), rsel.begin() + static_cast<long>(k), true);
    do {
      std::fill(csel.begin(), csel.end(), false);
      std::fill(csel.begin(), csel.begin() + static_cast<long>(k), true);
      do {
        RatMatrix sub(k, k);
        for (std::size_t i = 0, si = 0; i < m.rows(); ++i) {
          if (!rsel[i]) continue;
          for (std::size_t j = 0, sj = 0; j < m.cols(); ++j)
            if (csel[j]) sub(si, sj++) = m(i, j);
          ++si;
        }
        if (cofactor_determinant(sub) != 0) return k;
      } while (std::prev_permutation(csel.begin(), csel.end()));
    } while (std::prev_permutation(rsel.begin(), rsel.end()));
  }
  return 0;
}

/// Grid values of D_x f and S_x f at x(s), s = j/2, straight from the
/// defining difference quotients.
inline Rational grid_dx(const Lattice& l, const Poly& f, long j) {
  const Rational xp = l.eval_half(j + 1), xm = l.eval_half(j - 1);
  return (f(xp) - f(xm)) / (xp - xm);
}
inline Rational grid_sx(const Lattice& l, const Poly& f, long j) {
  return (f(l.eval_half(j + 1)) + f(l.eval_half(j - 1))) / 2;
}

using latops::RandomSource;

}  // namespace latops::testing
