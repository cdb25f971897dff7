#pragma once

#include <string>
#include <vector>

#include "latops/functional.hpp"
#include "latops/linalg.hpp"

namespace latops {

/// φ·D_x u = ψ·S_x u.
struct PearsonPair {
  Poly phi;
  Poly psi;

  bool is_classical() const { return phi.degree() <= Degree(2) && psi.degree() <= Degree(1); }
};

/// π2·u = π1·v.
struct ModPair {
  Poly pi2;
  Poly pi1;
};

template <class Pair>
struct SolutionSet {
  std::vector<Pair> solutions;
  /// Nullspace vectors in which one of the two polynomials vanishes.
  std::vector<Pair> degenerate;
  /// Equations were imposed for z^j with 0 <= j <= residual_range.
  long residual_range = -1;
  /// Independent residual recomputation for each entry of `solutions`.
  std::vector<IdentityCheck> residuals;
};

namespace detail {

inline Poly slice(const RatVector& v, std::size_t from, std::size_t count) {
  return Poly(std::vector<Rational>(v.begin() + static_cast<long>(from), v.begin() + static_cast<long>(from + count)));
}

}  // namespace detail

/// Residuals <φ D_x u - ψ S_x u, z^j>, 0 <= j <= n_eq.
inline IdentityCheck verify_pearson(const Lattice& l, const Functional& u, const PearsonPair& pp, long n_eq) {
  using namespace word;
  const Combination c{{1, {u, mul(pp.phi) * dx()}}, {-1, {u, mul(pp.psi) * sx()}}};
  const long feasible = valid_order(c);
  if (feasible < n_eq) throw OrderExceeded(n_eq, feasible, "verify_pearson: pairing range");
  return residuals(l, "pearson", c, n_eq);
}

/// Basis of all (φ, ψ) with deg φ <= dphi, deg ψ <= dpsi such that
/// <φ D_x u - ψ S_x u, z^j> = 0 for 0 <= j <= n_eq. The unknown vector is
/// (φ_0..φ_dphi, ψ_0..ψ_dpsi) and the basis follows the nullspace
/// normalization (first nonzero coordinate 1).
inline SolutionSet<PearsonPair> detect_semiclassical(const Lattice& l, const Functional& u, int dphi, int dpsi,
                                                     long n_eq) {
  if (dphi < 0 || dpsi < 0 || n_eq < 0) throw ValidationError("degree bounds and n_eq must be non-negative");
  const long need = n_eq + std::max(dphi, dpsi) + 1;
  if (u.order() < need) throw OrderExceeded(need, u.order(), "detect_semiclassical");

  const auto nphi = static_cast<std::size_t>(dphi) + 1, npsi = static_cast<std::size_t>(dpsi) + 1;
  RatMatrix system(static_cast<std::size_t>(n_eq) + 1, nphi + npsi);
  for (long j = 0; j <= n_eq; ++j) {
    const auto row = static_cast<std::size_t>(j);
    for (std::size_t i = 0; i < nphi; ++i)
      system(row, i) = -u.pair(dx_poly(l, Poly::monomial(static_cast<int>(i + row))));
    for (std::size_t i = 0; i < npsi; ++i)
      system(row, nphi + i) = -u.pair(sx_poly(l, Poly::monomial(static_cast<int>(i + row))));
  }

  SolutionSet<PearsonPair> out;
  out.residual_range = n_eq;
  for (const auto& v : rational_nullspace(system)) {
    PearsonPair pp{detail::slice(v, 0, nphi), detail::slice(v, nphi, npsi)};
    if (pp.phi.is_zero() || pp.psi.is_zero()) {
      out.degenerate.push_back(std::move(pp));
      continue;
    }
    out.residuals.push_back(verify_pearson(l, u, pp, n_eq));
    if (!out.residuals.back().passed()) throw Error("internal: detected Pearson pair fails verification");
    out.solutions.push_back(std::move(pp));
  }
  return out;
}

/// Residuals <u, π2 z^j> - <v, π1 z^j>, 0 <= j <= n_eq.
inline IdentityCheck verify_modification(const Lattice& l, const Functional& u, const Functional& v,
                                         const ModPair& mp, long n_eq) {
  using namespace word;
  const Combination c{{1, {u, mul(mp.pi2)}}, {-1, {v, mul(mp.pi1)}}};
  const long feasible = valid_order(c);
  if (feasible < n_eq) throw OrderExceeded(n_eq, feasible, "verify_modification: pairing range");
  return residuals(l, "rational modification", c, n_eq);
}

/// Basis of all (π2, π1) with deg π2 <= d2, deg π1 <= d1 such that
/// <u, π2 z^j> = <v, π1 z^j> for 0 <= j <= n_eq. Unknown vector is
/// (π2 coefficients, π1 coefficients).
inline SolutionSet<ModPair> solve_rational_modification(const Lattice& l, const Functional& u, const Functional& v,
                                                        int d2, int d1, long n_eq) {
  if (d2 < 0 || d1 < 0 || n_eq < 0) throw ValidationError("degree bounds and n_eq must be non-negative");
  if (u.order() < n_eq + d2) throw OrderExceeded(n_eq + d2, u.order(), "solve_rational_modification: u");
  if (v.order() < n_eq + d1) throw OrderExceeded(n_eq + d1, v.order(), "solve_rational_modification: v");

  const auto n2 = static_cast<std::size_t>(d2) + 1, n1 = static_cast<std::size_t>(d1) + 1;
  RatMatrix system(static_cast<std::size_t>(n_eq) + 1, n2 + n1);
  for (long j = 0; j <= n_eq; ++j) {
    const auto row = static_cast<std::size_t>(j);
    for (std::size_t i = 0; i < n2; ++i) system(row, i) = u.moment(i + row);
    for (std::size_t i = 0; i < n1; ++i) system(row, n2 + i) = -v.moment(i + row);
  }

  SolutionSet<ModPair> out;
  out.residual_range = n_eq;
  for (const auto& vec : rational_nullspace(system)) {
    ModPair mp{detail::slice(vec, 0, n2), detail::slice(vec, n2, n1)};
    if (mp.pi2.is_zero() || mp.pi1.is_zero()) {
      out.degenerate.push_back(std::move(mp));
      continue;
    }
    out.residuals.push_back(verify_modification(l, u, v, mp, n_eq));
    if (!out.residuals.back().passed()) throw Error("internal: modification pair fails verification");
    out.solutions.push_back(std::move(mp));
  }
  return out;
}

/// Pearson pair for v obtained from one for u and a rational modification
/// π2 u = π1 v. Φ and Ψ come from eliminating S_x u between
///   K1·S_x u = φ(A·D_x v + B·S_x v),   K2·S_x u = φ(C·D_x v + D·S_x v),
/// so that φ·(Φ·D_x v + Ψ·S_x v) = 0 with Φ = K2·A - K1·C, Ψ = K2·B - K1·D,
/// everything scaled by α².
struct Transfer {
  Poly Phi;
  Poly Psi;
  Poly K1;
  Poly K2;
};

inline Transfer transfer_semiclassical(const Lattice& l, const ModPair& mod, const PearsonPair& pearson) {
  if (mod.pi1.is_zero() || mod.pi2.is_zero()) throw ValidationError("modification polynomials must be nonzero");
  if (pearson.phi.is_zero() || pearson.psi.is_zero()) throw ValidationError("Pearson polynomials must be nonzero");
  const Rational& a = l.alpha();
  const Poly& u1 = l.U1();
  const Poly& u2 = l.U2();
  const Poly& phi = pearson.phi;
  const Poly& psi = pearson.psi;

  const Poly d1 = dx_poly(l, mod.pi1), s1 = sx_poly(l, mod.pi1);
  const Poly d2 = dx_poly(l, mod.pi2), s2 = sx_poly(l, mod.pi2);

  const Poly A = s1 - (u1 * d1) / a;
  const Poly B = d1 / a;
  const Poly C = (a * u2 - (u1 * u1) / a) * d1;
  const Poly D = s1 + (u1 * d1) / a;

  Transfer t;
  t.K1 = (phi * d2 + (a * s2 - u1 * d2) * psi) / a;
  t.K2 = (phi * (a * s2 + u1 * d2) + psi * (a * a * u2 - u1 * u1) * d2) / a;
  const Rational scale = a * a;
  t.Phi = (t.K2 * A - t.K1 * C) * scale;
  t.Psi = (t.K2 * B - t.K1 * D) * scale;
  if (t.Phi.is_zero() && t.Psi.is_zero()) throw DegenerateError("transfer produced Φ = Ψ = 0");
  return t;
}

struct TransferCheck {
  /// φ·(Φ D_x v + Ψ S_x v) = 0, the asserted identity.
  IdentityCheck with_phi;
  /// Φ D_x v + Ψ S_x v = 0; informational, cancelling φ is not justified.
  IdentityCheck without_phi;
};

inline TransferCheck verify_transfer(const Lattice& l, const Functional& v, const Poly& phi, const Transfer& t) {
  using namespace word;
  return {residuals(l, "phi*(Phi Dx v + Psi Sx v)",
                    {{1, {v, mul(phi * t.Phi) * dx()}}, {1, {v, mul(phi * t.Psi) * sx()}}}),
          residuals(l, "Phi Dx v + Psi Sx v", {{1, {v, mul(t.Phi) * dx()}}, {1, {v, mul(t.Psi) * sx()}}})};
}

}  // namespace latops
