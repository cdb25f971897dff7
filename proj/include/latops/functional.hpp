#pragma once

#include <algorithm>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "latops/difference_ops.hpp"
#include "latops/error.hpp"
#include "latops/lattice.hpp"
#include "latops/linalg.hpp"
#include "latops/report.hpp"

namespace latops {

/// Linear functional on polynomials known through its moments
/// μ_n = <u, z^n>, n = 0..order. Nothing beyond the order is implied.
class Functional {
 public:
  Functional() = default;
  explicit Functional(std::vector<Rational> moments) : moments_(std::move(moments)) {}

  long order() const noexcept { return static_cast<long>(moments_.size()) - 1; }
  const std::vector<Rational>& moments() const noexcept { return moments_; }
  const Rational& moment(std::size_t n) const { return moments_.at(n); }

  /// <u, p>; throws OrderExceeded if deg p > order.
  Rational pair(const Poly& p) const {
    if (p.is_zero()) return 0;
    const long d = p.degree().value();
    if (d > order()) throw OrderExceeded(d, order());
    Rational acc = 0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += p.coeffs()[i] * moments_[i];
    return acc;
  }

  friend bool operator==(const Functional&, const Functional&) = default;

 private:
  std::vector<Rational> moments_;
};

/// Applies the adjoint of a functional word to a polynomial:
/// <W u, p> = <u, adjoint(W) p>. Atoms are consumed outermost first, with
/// D_x acting as -D_x, S_x as S_x and Mul(f) as multiplication by f.
inline Poly adjoint_apply(const Lattice& l, const OpWord& w, Poly p) {
  for (const auto& atom : w) {
    if (std::holds_alternative<op::Dx>(atom)) p = -dx_poly(l, p);
    else if (std::holds_alternative<op::Sx>(atom)) p = sx_poly(l, p);
    else p = std::get<op::Mul>(atom).f * p;
  }
  return p;
}

/// Largest j for which <W u, z^j> is computable from moments up to
/// `order`: multiplications cost their degree, each D_x gains one (its
/// adjoint lowers degree), S_x is neutral.
inline long valid_order(long order, const OpWord& w) {
  long v = order;
  for (const auto& atom : w) {
    if (std::holds_alternative<op::Dx>(atom)) ++v;
    else if (const auto* m = std::get_if<op::Mul>(&atom); m && !m->f.is_zero())
      v -= m->f.degree().value();
  }
  return v;
}

/// A word applied to a base functional, e.g. D_x^2(φ v) = {v, [Dx, Dx, Mul φ]}.
struct FunctionalExpr {
  Functional base;
  OpWord word;

  long valid_order() const { return latops::valid_order(base.order(), word); }
};

/// <e, p>, exact.
inline Rational pair(const Lattice& l, const FunctionalExpr& e, const Poly& p) {
  const Poly q = adjoint_apply(l, e.word, p);
  if (!q.is_zero() && q.degree().value() > e.base.order())
    throw OrderExceeded(q.degree().value(), e.base.order(), "pairing");
  return e.base.pair(q);
}

/// Materializes the moments of W u up to their valid order.
inline Functional act(const Lattice& l, const Functional& u, const OpWord& w) {
  const long v = valid_order(u.order(), w);
  if (v < 0) throw OrderExceeded(u.order() - v, u.order(), "act: empty output");
  FunctionalExpr e{u, w};
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(v) + 1);
  for (long j = 0; j <= v; ++j) out.push_back(pair(l, e, Poly::monomial(static_cast<int>(j))));
  return Functional(std::move(out));
}

/// Σ coeff_i · expr_i, representing one side minus the other of an
/// identity between functionals.
struct Term {
  Rational coeff;
  FunctionalExpr expr;
};
using Combination = std::vector<Term>;

inline long valid_order(const Combination& c) {
  long v = std::numeric_limits<long>::max();
  for (const auto& t : c) v = std::min(v, t.expr.valid_order());
  return v;
}

/// Residuals r_j = <Σ coeff·expr, z^j> for every j the truncation allows,
/// capped at max_j when max_j >= 0.
inline IdentityCheck residuals(const Lattice& l, const std::string& name, const Combination& c,
                               long max_j = -1) {
  IdentityCheck check{name, std::nullopt, {}, valid_order(c)};
  if (max_j >= 0) check.range = std::min(check.range, max_j);
  if (check.range < 0)
    throw OrderExceeded(-check.range, 0, name + ": no feasible pairing index");
  for (long j = 0; j <= check.range; ++j) {
    const Poly zj = Poly::monomial(static_cast<int>(j));
    Rational r = 0;
    for (const auto& t : c) r += t.coeff * pair(l, t.expr, zj);
    check.residuals.push_back(r);
  }
  return check;
}

/// Monic orthogonal polynomials P_0..P_N of a regular functional with norms
/// h_n = <u, P_n^2> and recurrence P_{n+1} = (z - B_n)P_n - C_n P_{n-1}.
struct OPSData {
  std::vector<Poly> P;
  std::vector<Rational> h;
  std::vector<Rational> B;  // B_0..B_{N-1}
  std::vector<Rational> C;  // C[n] = C_n for 1 <= n <= N; C[0] unused (0)

  int n_max() const { return static_cast<int>(P.size()) - 1; }
};

/// Builds the monic OPS by solving the Hankel system <u, z^j P_n> = 0,
/// j < n, degree by degree. The recurrence is then checked independently.
inline OPSData ops_from_moments(const Functional& u, int n_max) {
  if (n_max < 0) throw ValidationError("n_max must be non-negative");
  if (2L * n_max > u.order()) throw OrderExceeded(2L * n_max, u.order(), "ops_from_moments");
  OPSData ops;
  for (int n = 0; n <= n_max; ++n) {
    Poly pn;
    if (n == 0) {
      pn = Poly(1);
    } else {
      RatMatrix hankel(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
      RatVector rhs(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
          hankel(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
              u.moment(static_cast<std::size_t>(i + j));
        rhs[static_cast<std::size_t>(i)] = -u.moment(static_cast<std::size_t>(n + i));
      }
      auto sol = solve_particular(hankel, rhs);
      // h_{n-1} != 0 was established, so the Hankel block is invertible.
      if (!sol) throw RegularityError(n - 1);
      sol->push_back(1);
      pn = Poly(std::move(*sol));
    }
    const Rational hn = u.pair(pn * pn);
    if (hn == 0) throw RegularityError(n);
    ops.P.push_back(std::move(pn));
    ops.h.push_back(hn);
  }
  ops.C.assign(static_cast<std::size_t>(n_max) + 1, Rational(0));
  for (int n = 0; n < n_max; ++n) {
    const Poly& pn = ops.P[static_cast<std::size_t>(n)];
    ops.B.push_back(u.pair(Poly::z() * pn * pn) / ops.h[static_cast<std::size_t>(n)]);
  }
  for (int n = 1; n <= n_max; ++n)
    ops.C[static_cast<std::size_t>(n)] = ops.h[static_cast<std::size_t>(n)] / ops.h[static_cast<std::size_t>(n - 1)];

  for (int n = 0; n < n_max; ++n) {
    const auto un = static_cast<std::size_t>(n);
    Poly rhs = Poly{Rational(-ops.B[un]), Rational(1)} * ops.P[un];
    if (n >= 1) rhs -= ops.C[un] * ops.P[un - 1];
    if (!(rhs == ops.P[un + 1])) throw Error("internal: recurrence check failed at n = " + std::to_string(n));
  }
  return ops;
}

/// The functional product and commutation rules, each checked by pairing
/// both sides against z^j over the whole feasible range.
inline Report check_functional_identities(const Lattice& l, const Poly& f, const Functional& u,
                                          int max_commutation_n = 4) {
  using namespace word;
  const Rational& a = l.alpha();
  const Poly df = dx_poly(l, f), sf = sx_poly(l, f);
  const Poly& u1 = l.U1();
  const Poly& u2 = l.U2();
  auto e = [&](OpWord w) { return FunctionalExpr{u, std::move(w)}; };

  Report r;
  r.checks.push_back(residuals(l, "Dx(fu)",
                               {{1, e(dx() * mul(f))},
                                {-1, e(mul(sf - (u1 * df) / a) * dx())},
                                {-1 / a, e(mul(df) * sx())}}));
  r.checks.push_back(residuals(l, "Sx(fu)",
                               {{1, e(sx() * mul(f))},
                                {-1, e(mul((a * u2 - (u1 * u1) / a) * df) * dx())},
                                {-1, e(mul(sf + (u1 * df) / a) * sx())}}));
  r.checks.push_back(residuals(l, "f*Dx(u)",
                               {{1, e(mul(f) * dx())}, {-1, e(dx() * mul(sf))}, {1, e(sx() * mul(df))}}));
  for (int n = 0; n <= max_commutation_n; ++n) {
    r.checks.push_back(residuals(l, "commutation n=" + std::to_string(n),
                                 {{a, e(dx(n) * sx())},
                                  {-alpha_n(l, n + 1), e(sx() * dx(n))},
                                  {-gamma_n(l, n), e(mul(u1) * dx(n + 1))}}));
  }
  return r;
}

/// D_x^n(f u) against Σ_k T_{n,k} f · D_x^(n-k) S_x^k u. The left side goes
/// through repeated adjoint D_x, independent of the T recursion.
inline Report check_leibniz(const Lattice& l, const Poly& f, const Functional& u, int n) {
  using namespace word;
  Combination c{{1, FunctionalExpr{u, dx(n) * mul(f)}}};
  for (int k = 0; k <= n; ++k)
    c.push_back({-1, FunctionalExpr{u, mul(t_coeff(l, n, k, f)) * dx(n - k) * sx(k)}});
  Report r;
  r.checks.push_back(residuals(l, "leibniz n=" + std::to_string(n), c));
  return r;
}

}  // namespace latops
