#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "latops/difference_ops.hpp"
#include "latops/functional.hpp"
#include "latops/linalg.hpp"
#include "latops/semiclassical.hpp"

namespace latops {

/// Coefficient table t_{j,n}: rows[j][n], j = 0..J, n = 0..depth-1.
class CoefficientTable {
 public:
  CoefficientTable() = default;
  explicit CoefficientTable(std::vector<std::vector<Rational>> rows) : rows_(std::move(rows)) {
    for (const auto& r : rows_)
      if (r.size() != rows_.front().size()) throw ValidationError("coefficient table rows differ in length");
  }

  std::size_t row_count() const noexcept { return rows_.size(); }
  /// Number of tabulated n (columns).
  long depth() const noexcept { return rows_.empty() ? 0 : static_cast<long>(rows_.front().size()); }
  const std::vector<std::vector<Rational>>& rows() const noexcept { return rows_; }

  const Rational& at(long j, long n) const {
    if (j < 0 || j >= static_cast<long>(rows_.size()) || n < 0 || n >= depth())
      throw ValidationError("coefficient table has no entry (" + std::to_string(j) + ", " + std::to_string(n) + ")");
    return rows_[static_cast<std::size_t>(j)][static_cast<std::size_t>(n)];
  }
  Rational& at(long j, long n) {
    return const_cast<Rational&>(static_cast<const CoefficientTable&>(*this).at(j, n));
  }

 private:
  std::vector<std::vector<Rational>> rows_;
};

/// Inputs of the structure relation
///   Σ_{j=0..M} a_{j,n} P^{[k]}_{n-j} = Σ_{j=0..N} b_{j,n} Q^{[m]}_{n-j}.
struct CoherenceSpec {
  int k = 0, m = 0, M = 0, N = 0;
  CoefficientTable a;  // rows j = 0..M
  CoefficientTable b;  // rows j = 0..N
  Functional u, v;
  OPSData P, Q;

  int gap() const { return k - m; }
};

/// Checks the coefficient-table invariants: a_{0,n} = 1 = b_{0,n}, and
/// a_{M,n}, b_{N,n} nonzero wherever they multiply a polynomial (n >= M,
/// resp. n >= N).
inline void validate(const CoherenceSpec& s) {
  if (s.k < s.m || s.m < 0 || s.M < 0 || s.N < 0) throw ValidationError("need k >= m >= 0 and M, N >= 0");
  if (s.a.row_count() != static_cast<std::size_t>(s.M) + 1) throw ValidationError("table a must have M+1 rows");
  if (s.b.row_count() != static_cast<std::size_t>(s.N) + 1) throw ValidationError("table b must have N+1 rows");
  for (long n = s.M; n < s.a.depth(); ++n)
    if (s.a.at(s.M, n) == 0) throw ValidationError("a_{M," + std::to_string(n) + "} must be nonzero");
  for (long n = s.N; n < s.b.depth(); ++n)
    if (s.b.at(s.N, n) == 0) throw ValidationError("b_{N," + std::to_string(n) + "} must be nonzero");
}

/// Every tabulated entry is either a free coefficient or fixed by convention:
/// a_{0,n} = b_{0,n} = 1, and entries with j > n (multiplying a polynomial of
/// negative degree) are 0. Residuals are the deviations, a then b, row by row.
inline IdentityCheck check_table_conventions(const CoherenceSpec& s) {
  IdentityCheck c{"table conventions", std::nullopt, {}, -1};
  for (const auto* t : {&s.a, &s.b}) {
    for (long n = 0; n < t->depth(); ++n) c.residuals.push_back(t->at(0, n) - 1);
    for (long j = 1; j < static_cast<long>(t->row_count()); ++j)
      for (long n = 0; n < std::min(j, t->depth()); ++n) c.residuals.push_back(t->at(j, n));
  }
  c.range = static_cast<long>(c.residuals.size()) - 1;
  return c;
}

inline void require_table_conventions(const CoherenceSpec& s) {
  if (!check_table_conventions(s).passed())
    throw ValidationError("coefficient tables need a_{0,n} = b_{0,n} = 1 and a_{j,n} = b_{j,n} = 0 for j > n");
}

/// P^{[m]}_n = (γ_n!/γ_{n+m}!)·D_x^m P_{n+m}, for every n the data allows.
inline std::vector<Poly> normalized_derivative(const Lattice& l, const OPSData& ops, int m) {
  std::vector<Poly> out;
  for (int n = 0; n + m <= ops.n_max(); ++n) {
    const Poly d = dx_power(l, ops.P[static_cast<std::size_t>(n + m)], m);
    out.push_back(d * (gamma_factorial(l, n) / gamma_factorial(l, n + m)));
  }
  return out;
}

/// Residual polynomial of the structure relation for n = 0..n_max.
inline Report verify_coherence(const Lattice& l, const CoherenceSpec& s, int n_max) {
  const auto pk = normalized_derivative(l, s.P, s.k);
  const auto qm = normalized_derivative(l, s.Q, s.m);
  if (n_max >= static_cast<int>(pk.size()) || n_max >= static_cast<int>(qm.size()))
    throw ValidationError("OPS data too shallow for coherence check up to n = " + std::to_string(n_max));
  if (n_max >= s.a.depth() || n_max >= s.b.depth())
    throw ValidationError("coefficient tables too short for coherence check up to n = " + std::to_string(n_max));
  Report r;
  for (int n = 0; n <= n_max; ++n) {
    Poly res;
    for (int j = 0; j <= std::min(s.M, n); ++j) res += s.a.at(j, n) * pk[static_cast<std::size_t>(n - j)];
    for (int j = 0; j <= std::min(s.N, n); ++j) res -= s.b.at(j, n) * qm[static_cast<std::size_t>(n - j)];
    r.checks.push_back({"coherence n=" + std::to_string(n), res, {}, -1});
  }
  return r;
}

/// Order-(M+N) matrix l_{i,j}: a_{j-i,j} on rows i < N (i <= j <= M+i),
/// b_{j-i+N,j} on rows i >= N (i-N <= j <= i). The empty matrix has det 1.
inline std::pair<RatMatrix, Rational> build_A_matrix(const CoherenceSpec& s) {
  const int order = s.M + s.N;
  RatMatrix A(static_cast<std::size_t>(order), static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    for (int j = 0; j < order; ++j) {
      Rational e = 0;
      if (i <= s.N - 1 && i <= j && j <= s.M + i) e = s.a.at(j - i, j);
      else if (i >= s.N && i - s.N <= j && j <= i) e = s.b.at(j - i + s.N, j);
      A(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e;
    }
  }
  Rational det = determinant(A);
  return {std::move(A), std::move(det)};
}

/// Coefficients of Σ_i a'_{n,i} a^{[k]}_i = Σ_j b'_{n,j} b^{[m]}_j between the
/// dual bases of the normalized derivative sequences.
struct ConnectionCoeffs {
  int n = 0;
  std::vector<Rational> a_prime;  // i = 0..n+N
  std::vector<Rational> b_prime;  // j = 0..n+M
};

namespace detail {

/// Balance equations in the coordinates of the dual basis r_l of
/// R_n = Σ_j a_{j,n} P^{[k]}_{n-j}: a^{[k]}_i has coordinates a_{l-i,l}
/// (i <= l <= i+M) and b^{[m]}_j has b_{l-j,l} (j <= l <= j+N).
/// Columns are (a'_0..a'_{n+N}, b'_0..b'_{n+M}); rows l = 0..n+M+N.
inline RatMatrix balance_matrix(const CoherenceSpec& s, int n) {
  const int na = n + s.N + 1, nb = n + s.M + 1, top = n + s.M + s.N;
  RatMatrix eq(static_cast<std::size_t>(top) + 1, static_cast<std::size_t>(na + nb));
  for (int l = 0; l <= top; ++l) {
    const auto row = static_cast<std::size_t>(l);
    for (int i = std::max(0, l - s.M); i <= std::min(l, na - 1); ++i)
      eq(row, static_cast<std::size_t>(i)) = s.a.at(l - i, l);
    for (int j = std::max(0, l - s.N); j <= std::min(l, nb - 1); ++j)
      eq(row, static_cast<std::size_t>(na + j)) = -s.b.at(l - j, l);
  }
  return eq;
}

}  // namespace detail

/// Exact residual of the balance equations for a candidate solution.
inline std::vector<Rational> balance_residual(const CoherenceSpec& s, const ConnectionCoeffs& cc) {
  RatVector x = cc.a_prime;
  x.insert(x.end(), cc.b_prime.begin(), cc.b_prime.end());
  return mat_vec(detail::balance_matrix(s, cc.n), x);
}

/// Solves the balance equations with a'_{n,n+N} = b_{N,M+N+n} and
/// b'_{n,n+M} = a_{M,M+N+n}; all free coordinates are set to zero, the a'
/// columns being eliminated first.
inline ConnectionCoeffs solve_connection(const CoherenceSpec& s, int n) {
  const int na = n + s.N + 1, nb = n + s.M + 1, top = n + s.M + s.N;
  if (top >= s.a.depth() || top >= s.b.depth())
    throw ValidationError("coefficient tables must cover n = " + std::to_string(top));
  require_table_conventions(s);
  RatMatrix bal = detail::balance_matrix(s, n);
  RatMatrix sys(bal.rows() + 2, bal.cols());
  for (std::size_t i = 0; i < bal.rows(); ++i)
    for (std::size_t j = 0; j < bal.cols(); ++j) sys(i, j) = bal(i, j);
  RatVector rhs(sys.rows(), Rational(0));
  sys(bal.rows(), static_cast<std::size_t>(na - 1)) = 1;
  rhs[bal.rows()] = s.b.at(s.N, top);
  sys(bal.rows() + 1, static_cast<std::size_t>(na + nb - 1)) = 1;
  rhs[bal.rows() + 1] = s.a.at(s.M, top);

  auto x = solve_particular(sys, rhs);
  if (!x)
    throw DegenerateError("no connection coefficients with the required normalization at n = " +
                          std::to_string(n));
  ConnectionCoeffs cc;
  cc.n = n;
  cc.a_prime.assign(x->begin(), x->begin() + na);
  cc.b_prime.assign(x->begin() + na, x->end());
  return cc;
}

/// ψ_{N+k+n} u = D_x^{k-m}(φ_{M+m+n} v).
struct LemmaPolys {
  int n = 0;
  Poly psi;
  Poly phi;
};

inline LemmaPolys construct_lemma_polys(const Lattice& l, const CoherenceSpec& s, const ConnectionCoeffs& cc) {
  const int n = cc.n;
  if (s.P.n_max() < s.k + n + s.N || s.Q.n_max() < s.m + n + s.M)
    throw ValidationError("OPS data too shallow for the lemma polynomials at n = " + std::to_string(n));
  const Rational sign_k = (s.k % 2) ? -1 : 1, sign_m = (s.m % 2) ? -1 : 1;
  LemmaPolys lp;
  lp.n = n;
  for (int i = 0; i <= n + s.N; ++i) {
    const auto ki = static_cast<std::size_t>(s.k + i);
    const Rational c = sign_k * gamma_factorial(l, s.k + i) / (gamma_factorial(l, i) * s.P.h[ki]);
    lp.psi += (c * cc.a_prime[static_cast<std::size_t>(i)]) * s.P.P[ki];
  }
  for (int j = 0; j <= n + s.M; ++j) {
    const auto mj = static_cast<std::size_t>(s.m + j);
    const Rational c = sign_m * gamma_factorial(l, s.m + j) / (gamma_factorial(l, j) * s.Q.h[mj]);
    lp.phi += (c * cc.b_prime[static_cast<std::size_t>(j)]) * s.Q.P[mj];
  }
  if (lp.psi.degree() != Degree(s.N + s.k + n) || lp.phi.degree() != Degree(s.M + s.m + n))
    throw DegenerateError("lemma polynomial lost its leading coefficient at n = " + std::to_string(n));
  return lp;
}

/// r_j = <ψ u, z^j> - <D_x^gap(φ v), z^j> over the feasible range.
inline IdentityCheck verify_dual_relation(const Lattice& l, const LemmaPolys& lp, const Functional& u,
                                          const Functional& v, int gap) {
  using namespace word;
  return residuals(l, "dual relation n=" + std::to_string(lp.n),
                   {{1, {u, mul(lp.psi)}}, {-1, {v, dx(gap) * mul(lp.phi)}}});
}

/// Matrix of the linear system obtained by applying D_x to
///   left_i·u = D_x^gap(right_i·v),  i = 0..gap+2,
/// and expanding with the Leibniz rule. Unknowns are
///   (D_x u, D_x^{gap+1} v, D_x^gap S_x v, ..., S_x^{gap+1} v)
/// so column j >= 1 carries T_{gap+1, j-1}.
inline PolyMatrix build_cramer_matrix(const Lattice& l, const std::vector<Poly>& left, const std::vector<Poly>& right,
                                      int gap) {
  const auto order = static_cast<std::size_t>(gap) + 3;
  if (left.size() < order || right.size() < order) throw ValidationError("need gap+3 relations");
  PolyMatrix mtx(order, order);
  for (std::size_t i = 0; i < order; ++i) {
    mtx(i, 0) = l.U1() * dx_poly(l, left[i]) - l.alpha() * sx_poly(l, left[i]);
    for (std::size_t j = 1; j < order; ++j)
      mtx(i, j) = l.alpha() * t_coeff(l, gap + 1, static_cast<int>(j) - 1, right[i]);
  }
  return mtx;
}

inline PolyMatrix build_B_matrix(const Lattice& l, const std::vector<LemmaPolys>& lemma, const CoherenceSpec& s) {
  std::vector<Poly> left, right;
  for (const auto& lp : lemma) {
    left.push_back(lp.psi);
    right.push_back(lp.phi);
  }
  return build_cramer_matrix(l, left, right, s.gap());
}

/// Outcome of the Cramer solve:
///   det·D_x u = π1·S_x u,  det·D_x S_x^gap v = π2·S_x u,
///   det·S_x^{gap+1} v = π3·S_x u,  π3·D_x S_x^gap v = π2·S_x^{gap+1} v.
struct TheoremSolution {
  Poly det;
  Poly pi1, pi2, pi3;
  PolyMatrix adjugate;
  /// Row equations, the four identities above and the adjugate check.
  Report report;

  /// φ1 D_x u = ψ1 S_x u.
  PearsonPair semiclassical_u() const { return {det, pi1}; }
  /// φ2 S_x u = ψ2 S_x^{gap+1} v.
  ModPair modification_Su() const { return {pi3, det}; }
  /// φ3 D_x (S_x^gap v) = ψ3 S_x (S_x^gap v).
  PearsonPair semiclassical_Sv() const { return {pi3, pi2}; }
};

namespace detail {

inline std::vector<FunctionalExpr> cramer_unknowns(const Functional& u, const Functional& v, int gap) {
  using namespace word;
  std::vector<FunctionalExpr> x{{u, dx()}};
  for (int j = 0; j <= gap + 1; ++j) x.push_back({v, dx(gap + 1 - j) * sx(j)});
  return x;
}

}  // namespace detail

/// D_x left_i·S_x u = Σ_j mtx(i,j)·X_j for every row, X the Cramer unknowns.
inline Report verify_row_equations(const Lattice& l, const PolyMatrix& mtx, const std::vector<Poly>& left,
                                   const Functional& u, const Functional& v, int gap) {
  using namespace word;
  const auto unknowns = detail::cramer_unknowns(u, v, gap);
  if (mtx.cols() != unknowns.size() || left.size() < mtx.rows()) throw ValidationError("row equation shape mismatch");
  Report r;
  for (std::size_t i = 0; i < mtx.rows(); ++i) {
    Combination row{{-1, {u, mul(dx_poly(l, left[i])) * sx()}}};
    for (std::size_t j = 0; j < mtx.cols(); ++j) {
      FunctionalExpr e = unknowns[j];
      e.word.insert(e.word.begin(), op::Mul{mtx(i, j)});
      row.push_back({1, std::move(e)});
    }
    r.checks.push_back(residuals(l, "row equation " + std::to_string(i), row));
  }
  return r;
}

/// Solves mtx·X = d·S_x u through the adjugate and verifies every resulting
/// identity on truncated moments. `left` are the polynomials multiplying u
/// (d_i = D_x left_i). Throws DegenerateError when det(mtx) vanishes
/// identically.
inline TheoremSolution solve_cramer_system(const Lattice& l, const PolyMatrix& mtx, const std::vector<Poly>& left,
                                           const Functional& u, const Functional& v, int gap) {
  using namespace word;
  const std::size_t order = static_cast<std::size_t>(gap) + 3;
  if (mtx.rows() != order || !mtx.is_square()) throw ValidationError("Cramer matrix must have order gap+3");

  auto [det, adj] = poly_matrix_det_adjugate(mtx);
  if (det.is_zero()) throw DegenerateError("Cramer matrix determinant vanishes identically");

  TheoremSolution sol;
  sol.report = verify_row_equations(l, mtx, left, u, v, gap);
  sol.det = det;
  sol.adjugate = adj;
  {
    PolyMatrix scaled(order, order);
    for (std::size_t i = 0; i < order; ++i) scaled(i, i) = det;
    const bool ok = mtx * adj == scaled;
    sol.report.checks.push_back({"adjugate", ok ? Poly() : Poly(1), {}, -1});
  }
  auto combine = [&](std::size_t r) {
    Poly p;
    for (std::size_t i = 0; i < order; ++i) p += adj(r, i) * dx_poly(l, left[i]);
    return p;
  };
  sol.pi1 = combine(0);
  sol.pi2 = combine(static_cast<std::size_t>(gap) + 1);
  sol.pi3 = combine(static_cast<std::size_t>(gap) + 2);

  auto& checks = sol.report.checks;
  checks.push_back(residuals(l, "B Dx u = pi1 Sx u", {{1, {u, mul(det) * dx()}}, {-1, {u, mul(sol.pi1) * sx()}}}));
  checks.push_back(residuals(l, "B Dx Sx^gap v = pi2 Sx u",
                             {{1, {v, mul(det) * dx() * sx(gap)}}, {-1, {u, mul(sol.pi2) * sx()}}}));
  checks.push_back(residuals(l, "B Sx^(gap+1) v = pi3 Sx u",
                             {{1, {v, mul(det) * sx(gap + 1)}}, {-1, {u, mul(sol.pi3) * sx()}}}));
  checks.push_back(residuals(l, "pi3 Dx Sx^gap v = pi2 Sx^(gap+1) v",
                             {{1, {v, mul(sol.pi3) * dx() * sx(gap)}}, {-1, {v, mul(sol.pi2) * sx(gap + 1)}}}));
  return sol;
}

inline TheoremSolution solve_theorem_system(const Lattice& l, const PolyMatrix& Bm, const std::vector<LemmaPolys>& lemma,
                                            const CoherenceSpec& s) {
  std::vector<Poly> left;
  for (const auto& lp : lemma) left.push_back(lp.psi);
  return solve_cramer_system(l, Bm, left, s.u, s.v, s.gap());
}

/// Result of the full verify → lemma → theorem chain.
struct CoherenceAnalysis {
  Report coherence;
  RatMatrix A;
  Rational detA;
  std::vector<ConnectionCoeffs> connection;
  std::vector<LemmaPolys> lemma;
  Report dual_relations;
  /// k = m: ψ_{N+k} u = φ_{M+m} v.
  std::optional<ModPair> modification;
  std::optional<IdentityCheck> modification_check;
  /// k > m: Cramer solve of the B system.
  std::optional<PolyMatrix> B;
  std::optional<Poly> Bdet;
  Report row_equations;
  std::optional<TheoremSolution> theorem;
  /// First stage that failed, empty when everything passed.
  std::string failure;

  bool passed() const { return failure.empty(); }
};

/// OPS depths needed to run the whole chain up to n_max.
inline std::pair<int, int> required_ops_depth(int k, int m, int M, int N, int n_max) {
  const int n_lemma = std::max(n_max, k - m + 2);
  return {std::max(n_max + k, N + k + n_lemma), std::max(n_max + m, M + m + n_lemma)};
}

inline CoherenceAnalysis analyze_coherence(const Lattice& l, const CoherenceSpec& s, int n_max) {
  validate(s);
  CoherenceAnalysis out;
  out.coherence.checks.push_back(check_table_conventions(s));
  out.coherence.append(verify_coherence(l, s, n_max));
  if (!out.coherence.passed()) {
    out.failure = "coherence";
    return out;
  }
  std::tie(out.A, out.detA) = build_A_matrix(s);
  if (out.detA == 0) {
    out.failure = "A-matrix";
    return out;
  }
  const int n_lemma = s.gap() > 0 ? std::max(n_max, s.gap() + 2) : n_max;
  try {
    for (int n = 0; n <= n_lemma; ++n) {
      out.connection.push_back(solve_connection(s, n));
      out.lemma.push_back(construct_lemma_polys(l, s, out.connection.back()));
      out.dual_relations.checks.push_back(verify_dual_relation(l, out.lemma.back(), s.u, s.v, s.gap()));
    }
  } catch (const DegenerateError&) {
    out.failure = "lemma";
    return out;
  }
  if (!out.dual_relations.passed()) {
    out.failure = "dual-relation";
    return out;
  }
  if (s.gap() == 0) {
    out.modification = ModPair{out.lemma[0].psi, out.lemma[0].phi};
    out.modification_check = residuals(l, "psi u = phi v", {{1, {s.u, word::mul(out.lemma[0].psi)}},
                                                            {-1, {s.v, word::mul(out.lemma[0].phi)}}});
    if (!out.modification_check->passed()) out.failure = "modification";
    return out;
  }
  out.B = build_B_matrix(l, out.lemma, s);
  std::vector<Poly> left;
  for (const auto& lp : out.lemma) left.push_back(lp.psi);
  out.row_equations = verify_row_equations(l, *out.B, left, s.u, s.v, s.gap());
  out.Bdet = bareiss_determinant(*out.B);
  if (!out.row_equations.passed()) {
    out.failure = "row-equations";
    return out;
  }
  try {
    out.theorem = solve_theorem_system(l, *out.B, out.lemma, s);
  } catch (const DegenerateError&) {
    out.failure = "B-determinant";
    return out;
  }
  if (!out.theorem->report.passed()) out.failure = "theorem";
  return out;
}

/// Inputs of π_N P^{[m]}_n = Σ_{j=n-M}^{n+N} c_{n,j} Q_j with deg π_N = N.
/// The table stores c[n][t] = c_{n, n-M+t}, t = 0..M+N; entries with a
/// negative Q index are ignored.
struct PiCoherenceSpec {
  int m = 0, M = 0, N = 0;
  Poly pi;
  std::vector<std::vector<Rational>> c;
  Functional u, v;
  OPSData P, Q;

  Rational coeff(int n, int j) const {
    const int t = j - n + M;
    if (n < 0 || n >= static_cast<int>(c.size())) throw ValidationError("c table has no row " + std::to_string(n));
    if (t < 0 || t > M + N || j < 0) return 0;
    return c[static_cast<std::size_t>(n)][static_cast<std::size_t>(t)];
  }
};

inline void validate(const PiCoherenceSpec& s) {
  if (s.m < 0 || s.M < 0 || s.N < 0) throw ValidationError("m, M, N must be non-negative");
  if (s.pi.degree() != Degree(s.N)) throw ValidationError("pi must have degree N");
  for (std::size_t n = 0; n < s.c.size(); ++n) {
    if (s.c[n].size() != static_cast<std::size_t>(s.M + s.N) + 1)
      throw ValidationError("each c row needs M+N+1 entries");
    if (static_cast<int>(n) >= s.M && s.c[n][0] == 0)
      throw ValidationError("c_{n,n-M} must be nonzero (n = " + std::to_string(n) + ")");
  }
}

struct PiCoherenceAnalysis {
  Report relation;
  std::vector<Poly> rho;  // rho[n] = ρ_{M+m+n}
  Report intermediate;    // ρ_{M+m+n} u = D_x^m(π_N Q_n v)
  std::optional<PolyMatrix> C;
  std::optional<Poly> Cdet;
  Report row_equations;
  /// Absent when det(C) vanishes identically.
  std::optional<TheoremSolution> solution;
  /// m = 0: ρ_M u = π_N v.
  std::optional<ModPair> modification;
  std::optional<IdentityCheck> modification_check;
  std::string failure;

  bool passed() const { return failure.empty(); }
};

inline std::pair<int, int> required_pi_ops_depth(int m, int M, int N, int n_max) {
  const int n_rows = std::max(n_max, m + 2);
  return {m + n_rows + M, std::max(n_max + N, n_rows)};
}

inline PiCoherenceAnalysis pi_coherence_pipeline(const Lattice& l, const PiCoherenceSpec& s, int n_max) {
  using namespace word;
  validate(s);
  PiCoherenceAnalysis out;

  const auto pm = normalized_derivative(l, s.P, s.m);
  if (n_max >= static_cast<int>(pm.size()) || s.Q.n_max() < n_max + s.N)
    throw ValidationError("OPS data too shallow for the relation check");
  for (int n = 0; n <= n_max; ++n) {
    Poly res = s.pi * pm[static_cast<std::size_t>(n)];
    for (int j = std::max(0, n - s.M); j <= n + s.N; ++j) res -= s.coeff(n, j) * s.Q.P[static_cast<std::size_t>(j)];
    out.relation.checks.push_back({"pi relation n=" + std::to_string(n), res, {}, -1});
  }
  if (!out.relation.passed()) {
    out.failure = "relation";
    return out;
  }

  const int n_rows = std::max(n_max, s.m + 2);
  if (s.P.n_max() < s.m + n_rows + s.M || s.Q.n_max() < n_rows)
    throw ValidationError("OPS data too shallow for the rho polynomials");
  const Rational sign = (s.m % 2) ? -1 : 1;
  for (int n = 0; n <= n_rows; ++n) {
    Poly rho;
    for (int j = std::max(0, n - s.N); j <= n + s.M; ++j) {
      const auto mj = static_cast<std::size_t>(s.m + j);
      const Rational w = sign * s.coeff(j, n) * gamma_factorial(l, s.m + j) * s.Q.h[static_cast<std::size_t>(n)] /
                         (gamma_factorial(l, j) * s.P.h[mj]);
      rho += w * s.P.P[mj];
    }
    if (rho.degree() != Degree(s.M + s.m + n)) {
      out.failure = "rho-degree";
      return out;
    }
    out.intermediate.checks.push_back(
        residuals(l, "rho u = Dx^m(pi Q_n v) n=" + std::to_string(n),
                  {{1, {s.u, mul(rho)}}, {-1, {s.v, dx(s.m) * mul(s.pi * s.Q.P[static_cast<std::size_t>(n)])}}}));
    out.rho.push_back(std::move(rho));
  }
  if (!out.intermediate.passed()) {
    out.failure = "intermediate";
    return out;
  }

  if (s.m == 0) {
    out.modification = ModPair{out.rho[0], s.pi};
    out.modification_check =
        residuals(l, "rho_M u = pi v", {{1, {s.u, mul(out.rho[0])}}, {-1, {s.v, mul(s.pi)}}});
    if (!out.modification_check->passed()) out.failure = "modification";
  }

  std::vector<Poly> left, right;
  for (int i = 0; i < s.m + 3; ++i) {
    left.push_back(out.rho[static_cast<std::size_t>(i)]);
    right.push_back(s.pi * s.Q.P[static_cast<std::size_t>(i)]);
  }
  out.C = build_cramer_matrix(l, left, right, s.m);
  out.Cdet = bareiss_determinant(*out.C);
  out.row_equations = verify_row_equations(l, *out.C, left, s.u, s.v, s.m);
  if (!out.row_equations.passed()) {
    if (out.failure.empty()) out.failure = "row-equations";
    return out;
  }
  // For m = 0 the conclusion rests on ρ_M u = π_N v alone; the Cramer solve
  // is only required for m > 0.
  if (out.Cdet->is_zero()) {
    if (s.m > 0 && out.failure.empty()) out.failure = "C-determinant";
    return out;
  }
  out.solution = solve_cramer_system(l, *out.C, left, s.u, s.v, s.m);
  if (!out.solution->report.passed() && out.failure.empty()) out.failure = "theorem";
  return out;
}

}  // namespace latops
