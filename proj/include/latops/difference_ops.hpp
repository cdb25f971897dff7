#pragma once

#include <variant>
#include <vector>

#include "latops/lattice.hpp"
#include "latops/poly.hpp"
#include "latops/report.hpp"

namespace latops {

/// Divided-difference operator D_x on polynomials:
/// (D_x f)(x(s)) = (f(x(s+1/2)) - f(x(s-1/2))) / (x(s+1/2) - x(s-1/2)).
inline Poly dx_poly(const Lattice& l, const Poly& f) {
  Poly out;
  for (std::size_t n = 1; n < f.size(); ++n)
    if (f[n] != 0) out += f[n] * l.images().dx(n);
  return out;
}

/// Averaging operator S_x: 2(S_x f)(x(s)) = f(x(s+1/2)) + f(x(s-1/2)).
inline Poly sx_poly(const Lattice& l, const Poly& f) {
  Poly out;
  for (std::size_t n = 0; n < f.size(); ++n)
    if (f[n] != 0) out += f[n] * l.images().sx(n);
  return out;
}

inline Poly dx_power(const Lattice& l, Poly f, int times) {
  for (int i = 0; i < times; ++i) f = dx_poly(l, f);
  return f;
}

inline Poly sx_power(const Lattice& l, Poly f, int times) {
  for (int i = 0; i < times; ++i) f = sx_poly(l, f);
  return f;
}

namespace op {
struct Dx {
  friend bool operator==(Dx, Dx) { return true; }
};
struct Sx {
  friend bool operator==(Sx, Sx) { return true; }
};
struct Mul {
  Poly f;
  friend bool operator==(const Mul&, const Mul&) = default;
};
}  // namespace op

using OpAtom = std::variant<op::Dx, op::Sx, op::Mul>;

/// A composition of operators written in ordinary notation: the leftmost
/// atom is the outermost, so [Sx, Dx] means S_x(D_x(·)).
using OpWord = std::vector<OpAtom>;

namespace word {
inline OpWord dx(int times = 1) { return OpWord(static_cast<std::size_t>(times), op::Dx{}); }
inline OpWord sx(int times = 1) { return OpWord(static_cast<std::size_t>(times), op::Sx{}); }
inline OpWord mul(Poly f) { return {op::Mul{std::move(f)}}; }
inline OpWord operator*(OpWord a, const OpWord& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}
}  // namespace word

/// Applies w to f, rightmost atom first.
inline Poly apply_word(const Lattice& l, const OpWord& w, Poly f) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (std::holds_alternative<op::Dx>(*it)) f = dx_poly(l, f);
    else if (std::holds_alternative<op::Sx>(*it)) f = sx_poly(l, f);
    else f = std::get<op::Mul>(*it).f * f;
  }
  return f;
}

/// Coefficient polynomial T_{n,k} f of the functional Leibniz rule
///   D_x^n (f u) = Σ_k T_{n,k} f · D_x^(n-k) S_x^k u.
/// Zero outside 0 <= k <= n.
inline Poly t_coeff(const Lattice& l, int n, int k, const Poly& f) {
  if (k < 0 || k > n || n < 0) return {};
  // row[k] holds T_{r,k} f for the current r
  std::vector<Poly> row{f};
  for (int r = 1; r <= n; ++r) {
    std::vector<Poly> next(static_cast<std::size_t>(r) + 1);
    for (int kk = 0; kk <= r; ++kk) {
      Poly t;
      if (kk <= r - 1) {
        const Poly& prev = row[static_cast<std::size_t>(kk)];
        t += sx_poly(l, prev);
        const Rational c = gamma_n(l, r - kk) / alpha_n(l, r - kk);
        if (c != 0) t -= c * (l.U1() * dx_poly(l, prev));
      }
      if (kk >= 1) t += dx_poly(l, row[static_cast<std::size_t>(kk - 1)]) / alpha_n(l, r + 1 - kk);
      next[static_cast<std::size_t>(kk)] = std::move(t);
    }
    row = std::move(next);
  }
  return row[static_cast<std::size_t>(k)];
}

/// Product rules for D_x and S_x and the f·D_x g rearrangement, checked as
/// exact polynomial identities. Every residual must vanish.
inline Report check_poly_identities(const Lattice& l, const Poly& f, const Poly& g) {
  const Rational& a = l.alpha();
  const Poly df = dx_poly(l, f), sf = sx_poly(l, f);
  const Poly dg = dx_poly(l, g), sg = sx_poly(l, g);
  Report r;
  r.checks.push_back({"Dx(fg)", dx_poly(l, f * g) - (df * sg + sf * dg), {}, -1});
  r.checks.push_back({"Sx(fg)", sx_poly(l, f * g) - (df * dg * l.U2() + sf * sg), {}, -1});
  const Poly inner = (sf - (l.U1() * df) / a) * g;
  r.checks.push_back({"f*Dx(g)", f * dg - (dx_poly(l, inner) - sx_poly(l, g * df) / a), {}, -1});
  return r;
}

}  // namespace latops
