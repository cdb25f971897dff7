#include <gtest/gtest.h>

#include "latops/linalg.hpp"
#include "support/oracles.hpp"

using namespace latops;
using latops::testing::cofactor_determinant;
using latops::testing::RandomSource;

namespace {

RatMatrix rat(std::size_t r, std::size_t c, std::vector<Rational> e) { return RatMatrix(r, c, std::move(e)); }

bool is_zero_vector(const RatVector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace

TEST(Rational, CanonicalString) {
  EXPECT_EQ(to_string(Rational(0)), "0/1");
  EXPECT_EQ(to_string(ratio(6, 4)), "3/2");
  EXPECT_EQ(to_string(parse_rational("-10/4")), "-5/2");
  EXPECT_EQ(to_string(parse_rational("7")), "7/1");
  EXPECT_THROW(parse_rational("1/0"), ValidationError);
  EXPECT_THROW(parse_rational("abc"), ValidationError);
  EXPECT_THROW(parse_rational("1.5"), ValidationError);
  EXPECT_THROW(parse_rational("1/-2"), ValidationError);
}

TEST(Rational, AdditionRoundTrip) {
  RandomSource rng(11);
  for (int i = 0; i < 200; ++i) {
    const Rational a = rng.rational(1000), c = rng.rational(1000);
    EXPECT_EQ(Rational((a + c) - c), a);
  }
}

TEST(Poly, ZeroDegreeIsNegativeInfinity) {
  const Poly zero;
  EXPECT_TRUE(zero.degree().is_neg_infinity());
  EXPECT_LT(zero.degree(), Degree(0));
  const Poly f{1, 2, 3};
  EXPECT_EQ((f * zero).degree(), f.degree() + zero.degree());
  EXPECT_EQ((f * f).degree(), Degree(4));
  EXPECT_EQ(Poly({1, 0, 0}).degree(), Degree(0));
}

TEST(Poly, DivMod) {
  const Poly num = Poly{-1, 0, 1};  // z^2 - 1
  const auto [q, r] = divmod(num, Poly{-1, 1});
  EXPECT_EQ(q, (Poly{1, 1}));
  EXPECT_TRUE(r.is_zero());
  EXPECT_THROW(exact_divide(Poly{1, 0, 1}, Poly{-1, 1}), DegenerateError);
}

TEST(Nullspace, RankOneUsesLeadingOneNormalization) {
  auto basis = rational_nullspace(rat(2, 2, {1, 2, 2, 4}));
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_EQ(basis[0], (RatVector{Rational(1), Rational(-1, 2)}));
}

TEST(Nullspace, FullRankIsEmpty) { EXPECT_TRUE(rational_nullspace(RatMatrix::identity(2)).empty()); }

TEST(Nullspace, SingleEquation) {
  auto basis = rational_nullspace(rat(1, 2, {1, 1}));
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_EQ(basis[0], (RatVector{Rational(1), Rational(-1)}));
}

TEST(Nullspace, ZeroRowsGivesFullSpace) {
  auto basis = rational_nullspace(RatMatrix(0, 3));
  ASSERT_EQ(basis.size(), 3u);
  EXPECT_EQ(basis[0], (RatVector{Rational(1), Rational(0), Rational(0)}));
}

// Brute-force oracle: every basis vector must satisfy m·x = 0, and the basis
// size must equal cols - rank where the rank is the order of the largest
// minor with nonzero cofactor determinant.
TEST(Nullspace, PropertyRandomMatrices) {
  RandomSource rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t r = static_cast<std::size_t>(rng.integer(1, 5));
    const std::size_t c = static_cast<std::size_t>(rng.integer(1, 6));
    RatMatrix m(r, c);
    const int zero_bias = rng.integer(0, 3);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.integer(0, 3) < zero_bias ? Rational(0) : rng.rational(3);
    // Make some rows dependent.
    if (r >= 2 && trial % 3 == 0)
      for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = m(0, j) * 2 - m(1, j);

    const auto basis = rational_nullspace(m);
    for (const auto& x : basis) EXPECT_TRUE(is_zero_vector(mat_vec(m, x)));

    // Independent rank via cofactor determinants of all k×k minors (k ≤ 5).
    std::size_t oracle_rank = 0;
    for (std::size_t k = std::min(r, c); k >= 1 && oracle_rank == 0; --k) {
      std::vector<std::size_t> rows(k), cols(k);
      std::vector<bool> rsel(r, false), csel(c, false);
      std::fill(rsel.begin(), rsel.begin() + static_cast<long>(k), true);
      do {
        std::fill(csel.begin(), csel.end(), false);
        std::fill(csel.begin(), csel.begin() + static_cast<long>(k), true);
        do {
          RatMatrix sub(k, k);
          for (std::size_t i = 0, si = 0; i < r; ++i) {
            if (!rsel[i]) continue;
            for (std::size_t j = 0, sj = 0; j < c; ++j)
              if (csel[j]) sub(si, sj++) = m(i, j);
            ++si;
          }
          if (cofactor_determinant(sub) != 0) oracle_rank = k;
        } while (oracle_rank == 0 && std::prev_permutation(csel.begin(), csel.end()));
      } while (oracle_rank == 0 && std::prev_permutation(rsel.begin(), rsel.end()));
    }
    EXPECT_EQ(basis.size(), c - oracle_rank);

    // Leading entries are 1, strictly increasing, and the basis is independent.
    std::size_t last = 0;
    for (std::size_t b = 0; b < basis.size(); ++b) {
      std::size_t lead = 0;
      while (basis[b][lead] == 0) ++lead;
      EXPECT_EQ(basis[b][lead], 1);
      if (b) {
        EXPECT_GT(lead, last);
      }
      last = lead;
      for (std::size_t o = 0; o < basis.size(); ++o)
        if (o != b) {
          EXPECT_EQ(basis[o][lead], 0);
        }
    }
  }
}

TEST(SolveParticular, InconsistentAndFreeVariablesZero) {
  EXPECT_FALSE(solve_particular(rat(2, 1, {1, 1}), {Rational(1), Rational(2)}).has_value());
  auto x = solve_particular(rat(1, 2, {1, 1}), {Rational(3)});
  ASSERT_TRUE(x);
  EXPECT_EQ(*x, (RatVector{Rational(3), Rational(0)}));
}

TEST(Determinant, EmptyIsOne) { EXPECT_EQ(determinant(RatMatrix(0, 0)), 1); }

TEST(PolyDetAdjugate, Triangular2x2) {
  const Poly z = Poly::z();
  PolyMatrix m(2, 2, {z, Poly(1), Poly(), z});
  const auto [det, adj] = poly_matrix_det_adjugate(m);
  EXPECT_EQ(det, z * z);
  EXPECT_EQ(adj, PolyMatrix(2, 2, {z, Poly(-1), Poly(), z}));
}

TEST(PolyDetAdjugate, OrderOne) {
  const Poly p{3, 0, 1};
  const auto [det, adj] = poly_matrix_det_adjugate(PolyMatrix(1, 1, {p}));
  EXPECT_EQ(det, p);
  EXPECT_EQ(adj, PolyMatrix(1, 1, {Poly(1)}));
}

TEST(PolyDetAdjugate, NonSquareThrows) {
  EXPECT_THROW(poly_matrix_det_adjugate(PolyMatrix(2, 3)), ValidationError);
}

TEST(PolyDetAdjugate, RandomMatchesCofactorOracle) {
  RandomSource rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 4));
    PolyMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.integer(0, 4) == 0 ? Poly() : rng.poly(2, 4);
    const auto [det, adj] = poly_matrix_det_adjugate(m);
    EXPECT_EQ(det, cofactor_determinant(m));
    PolyMatrix scaled(n, n);
    for (std::size_t i = 0; i < n; ++i) scaled(i, i) = det;
    EXPECT_EQ(m * adj, scaled);
    EXPECT_EQ(adj * m, scaled);
  }
}

TEST(PolyDetAdjugate, SingularNeedsPivoting) {
  const Poly z = Poly::z();
  // zero leading entry forces a row swap; second and third rows dependent
  PolyMatrix m(3, 3, {Poly(), z, Poly(1), z, Poly(1), Poly(), z * Rational(2), Poly(2), Poly()});
  const auto [det, adj] = poly_matrix_det_adjugate(m);
  EXPECT_TRUE(det.is_zero());
  EXPECT_EQ(det, cofactor_determinant(m));
  PolyMatrix zero(3, 3);
  EXPECT_EQ(m * adj, zero);
}
