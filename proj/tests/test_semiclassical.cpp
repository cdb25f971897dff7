#include <gtest/gtest.h>

#include "latops/semiclassical.hpp"
#include "support/oracles.hpp"

using namespace latops;
using latops::testing::bell_numbers;
using latops::testing::minor_rank;

namespace {

const Poly z = Poly::z();

Lattice linear() { return quadratic_lattice(0, 1, 0); }
Functional bell(int count) { return Functional(bell_numbers(count)); }
Functional shifted_bell(int count) {
  auto m = bell_numbers(count + 1);
  m.erase(m.begin());
  return Functional(std::move(m));
}

// (z ± 1/2)^n expanded binomially: on x(s) = s, D_x z^n and S_x z^n are the
// half difference and half sum of these.
Poly shifted_power(int n, const Rational& shift) {
  std::vector<Rational> c(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(k)] = binomial(n, k) * pow(shift, n - k);
  return Poly(std::move(c));
}

}  // namespace

TEST(DetectSemiclassical, BellMatchesIndependentNullspaceOracle) {
  const Functional u = bell(12);
  const int dphi = 2, dpsi = 2;
  const long n_eq = 8;
  const Rational half = ratio(1, 2);

  // Moment matrix built from binomial expansions, not the operator recursion.
  RatMatrix oracle(n_eq + 1, dphi + dpsi + 2);
  for (long j = 0; j <= n_eq; ++j) {
    for (int i = 0; i <= dphi; ++i) {
      const int n = static_cast<int>(j) + i;
      oracle(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) =
          -u.pair(shifted_power(n, half) - shifted_power(n, -half));
    }
    for (int i = 0; i <= dpsi; ++i) {
      const int n = static_cast<int>(j) + i;
      oracle(static_cast<std::size_t>(j), static_cast<std::size_t>(dphi + 1 + i)) =
          -u.pair(shifted_power(n, half) + shifted_power(n, -half)) / 2;
    }
  }

  const auto found = detect_semiclassical(linear(), u, dphi, dpsi, n_eq);
  ASSERT_FALSE(found.solutions.empty());
  EXPECT_EQ(found.solutions.size() + found.degenerate.size(), 6 - minor_rank(oracle));
  for (const auto& pp : found.solutions) {
    RatVector x;
    for (int i = 0; i <= dphi; ++i) x.push_back(pp.phi[static_cast<std::size_t>(i)]);
    for (int i = 0; i <= dpsi; ++i) x.push_back(pp.psi[static_cast<std::size_t>(i)]);
    for (const auto& r : mat_vec(oracle, x)) EXPECT_EQ(r, 0);
    EXPECT_TRUE(verify_pearson(linear(), u, pp, n_eq).passed());
  }
  for (const auto& c : found.residuals) EXPECT_TRUE(c.passed());
}

TEST(DetectSemiclassical, ContainsHandDerivedCharlierPair) {
  // Poisson weights w_k = 1/k! on the integers: the pointwise Pearson relation
  // at half-integers gives φ = z + 3/2, ψ = 1 - 2z.
  const Functional u = bell(14);
  const PearsonPair hand{Poly{ratio(3, 2), 1}, Poly{1, -2}};
  EXPECT_TRUE(verify_pearson(linear(), u, hand, 10).passed());
  EXPECT_TRUE(hand.is_classical());

  const auto found = detect_semiclassical(linear(), u, 1, 1, 10);
  ASSERT_EQ(found.solutions.size(), 1u);
  // Normalized so the first nonzero coordinate (φ_0) is 1.
  EXPECT_EQ(found.solutions[0].phi, hand.phi * ratio(2, 3));
  EXPECT_EQ(found.solutions[0].psi, hand.psi * ratio(2, 3));
}

TEST(DetectSemiclassical, ScalingInvariance) {
  const Functional u = bell(14);
  const auto found = detect_semiclassical(linear(), u, 1, 1, 10);
  ASSERT_FALSE(found.solutions.empty());
  const PearsonPair scaled{found.solutions[0].phi * Rational(-7), found.solutions[0].psi * Rational(-7)};
  EXPECT_TRUE(verify_pearson(linear(), u, scaled, 10).passed());
}

TEST(DetectSemiclassical, OrderExceeded) {
  EXPECT_THROW(detect_semiclassical(linear(), bell(4), 2, 2, 8), OrderExceeded);
}

TEST(VerifyPearson, FailsOnWrongPair) {
  const auto r = verify_pearson(linear(), bell(10), {Poly(1), Poly(1)}, 4);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.residuals[1], -2);
}

TEST(VerifyPearson, OrderZeroThrows) {
  EXPECT_THROW(verify_pearson(linear(), bell(1), {Poly(1), Poly(1)}, 2), OrderExceeded);
}

TEST(RationalModification, IdenticalFunctionals) {
  const Functional u = bell(8);
  const auto s = solve_rational_modification(linear(), u, u, 0, 0, 5);
  ASSERT_EQ(s.solutions.size(), 1u);
  EXPECT_EQ(s.solutions[0].pi2, Poly(1));
  EXPECT_EQ(s.solutions[0].pi1, Poly(1));
}

TEST(RationalModification, ChristoffelShift) {
  const auto s = solve_rational_modification(linear(), bell(12), shifted_bell(11), 1, 0, 8);
  ASSERT_EQ(s.solutions.size(), 1u);
  EXPECT_EQ(s.solutions[0].pi2, z);
  EXPECT_EQ(s.solutions[0].pi1, Poly(1));
}

TEST(RationalModification, PerturbedMomentHasNoSolution) {
  auto m = bell_numbers(6);
  m[0] = 2;
  const auto s = solve_rational_modification(linear(), bell(6), Functional(m), 0, 0, 2);
  EXPECT_TRUE(s.solutions.empty());
  EXPECT_TRUE(s.degenerate.empty());
}

TEST(RationalModification, OrderExceeded) {
  EXPECT_THROW(solve_rational_modification(linear(), bell(5), bell(20), 1, 0, 8), OrderExceeded);
}

TEST(Transfer, TrivialModificationNegatesPsi) {
  const Lattice l = q_lattice(2, 0, 1, 0);
  const PearsonPair pp{Poly{1, 2, 3}, Poly{-1, 5}};
  const auto t = transfer_semiclassical(l, {Poly(1), Poly(1)}, pp);
  EXPECT_EQ(t.K1, pp.psi);
  EXPECT_EQ(t.K2, pp.phi);
  const Rational a2 = l.alpha() * l.alpha();
  EXPECT_EQ(t.Phi, pp.phi * a2);
  EXPECT_EQ(t.Psi, -pp.psi * a2);
}

TEST(Transfer, ChristoffelEndToEnd) {
  const Lattice l = linear();
  const Functional u = bell(30);
  const Functional v = shifted_bell(29);
  const auto pearson = detect_semiclassical(l, u, 1, 1, 10);
  ASSERT_FALSE(pearson.solutions.empty());
  const PearsonPair& pp = pearson.solutions[0];
  const auto t = transfer_semiclassical(l, {z, Poly(1)}, pp);
  const auto check = verify_transfer(l, v, pp.phi, t);
  EXPECT_TRUE(check.with_phi.passed());
  EXPECT_GT(check.with_phi.range, 15);
}

TEST(Transfer, ZeroModificationRejected) {
  EXPECT_THROW(transfer_semiclassical(linear(), {Poly(), Poly(1)}, {Poly(1), Poly(1)}), ValidationError);
}
