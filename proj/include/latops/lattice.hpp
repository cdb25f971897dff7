#pragma once

#include <array>
#include <deque>
#include <memory>
#include <mutex>
#include <string>

#include "latops/error.hpp"
#include "latops/poly.hpp"
#include "latops/rational.hpp"

namespace latops {

enum class LatticeKind { q_quadratic, quadratic };

/// Raw lattice parameters as they appear in lattice files.
///
/// For the q-quadratic kind x(s) = c1·q^(-s) + c2·q^s + c3 and the lattice
/// is parametrized by p = q^(1/2) so that every x(j/2) is rational. For the
/// quadratic kind x(s) = c4·s² + c5·s + c6 and p is ignored.
struct LatticeParams {
  LatticeKind kind = LatticeKind::quadratic;
  Rational p = 1;
  std::array<Rational, 3> c{};
};

namespace detail {

/// Images of z^n under D_x and S_x, grown on demand. Entries are never
/// modified once appended, and deque growth keeps references stable, so
/// returned references stay valid while the owning lattice lives.
class MonomialImages {
 public:
  MonomialImages(Rational alpha, Rational beta, Poly u2)
      : s_z_{Rational(beta), Rational(alpha)}, u2_(std::move(u2)) {
    dx_.push_back(Poly{});
    sx_.push_back(Poly(1));
  }

  const Poly& dx(std::size_t n) {
    std::lock_guard lock(mutex_);
    grow(n);
    return dx_[n];
  }
  const Poly& sx(std::size_t n) {
    std::lock_guard lock(mutex_);
    grow(n);
    return sx_[n];
  }

 private:
  // D(z·z^(n-1)) = S z^(n-1) + (αz+β)·D z^(n-1)
  // S(z·z^(n-1)) = U2·D z^(n-1) + (αz+β)·S z^(n-1)
  void grow(std::size_t n) {
    while (dx_.size() <= n) {
      const Poly& d = dx_.back();
      const Poly& s = sx_.back();
      Poly next_d = s + s_z_ * d;
      Poly next_s = u2_ * d + s_z_ * s;
      dx_.push_back(std::move(next_d));
      sx_.push_back(std::move(next_s));
    }
  }

  std::mutex mutex_;
  Poly s_z_;
  Poly u2_;
  std::deque<Poly> dx_;
  std::deque<Poly> sx_;
};

}  // namespace detail

/// A lattice together with its derived constants α, β, U1, U2.
class Lattice {
 public:
  const LatticeParams& params() const noexcept { return params_; }
  LatticeKind kind() const noexcept { return params_.kind; }
  bool is_q() const noexcept { return params_.kind == LatticeKind::q_quadratic; }

  const Rational& alpha() const noexcept { return alpha_; }
  const Rational& beta() const noexcept { return beta_; }
  const Poly& U1() const noexcept { return u1_; }
  const Poly& U2() const noexcept { return u2_; }

  /// x(s) at s = j/2.
  Rational eval_half(long j) const {
    const auto& c = params_.c;
    if (is_q()) return c[0] * pow(params_.p, -j) + c[1] * pow(params_.p, j) + c[2];
    const Rational s = ratio(j, 2);
    return c[0] * s * s + c[1] * s + c[2];
  }

  detail::MonomialImages& images() const { return *images_; }

  friend Lattice make_lattice(const LatticeParams& params);

 private:
  Lattice() = default;

  LatticeParams params_;
  Rational alpha_;
  Rational beta_;
  Poly u1_;
  Poly u2_;
  std::shared_ptr<detail::MonomialImages> images_;
};

inline Lattice make_lattice(const LatticeParams& params) {
  Lattice l;
  l.params_ = params;
  const auto& c = params.c;
  if (params.kind == LatticeKind::q_quadratic) {
    if (params.p <= 0) throw ValidationError("lattice parameter p must be positive");
    if (params.p == 1) throw ValidationError("p = 1 requires the quadratic lattice kind");
    if (c[0] == 0 && c[1] == 0) throw ValidationError("q-quadratic lattice needs (c1, c2) != (0, 0)");
    l.alpha_ = (params.p + 1 / params.p) / 2;
    l.beta_ = (1 - l.alpha_) * c[2];
    const Rational a2m1 = l.alpha_ * l.alpha_ - 1;
    const Poly shifted{Rational(-c[2]), Rational(1)};
    l.u1_ = a2m1 * shifted;
    l.u2_ = a2m1 * (shifted * shifted - Poly(Rational(4 * c[0] * c[1])));
  } else {
    l.params_.p = 1;
    l.alpha_ = 1;
    l.beta_ = c[0] / 4;
    l.u1_ = Poly(Rational(2 * l.beta_));
    l.u2_ = Poly{Rational(-4 * l.beta_ * c[2] + c[1] * c[1] / 4), Rational(4 * l.beta_)};
  }
  l.images_ = std::make_shared<detail::MonomialImages>(l.alpha_, l.beta_, l.u2_);
  return l;
}

inline Lattice q_lattice(const Rational& p, const Rational& c1, const Rational& c2, const Rational& c3) {
  return make_lattice({LatticeKind::q_quadratic, p, {c1, c2, c3}});
}
inline Lattice quadratic_lattice(const Rational& c4, const Rational& c5, const Rational& c6) {
  return make_lattice({LatticeKind::quadratic, Rational(1), {c4, c5, c6}});
}

/// x(s) at s = j/2.
inline Rational lattice_eval(const Lattice& l, long j) { return l.eval_half(j); }

/// γ_n, α_n and γ_n! for one index n ≥ -1.
struct SeqConstants {
  long n;
  Rational gamma_n;
  Rational alpha_n;
  Rational gamma_factorial_n;
};

inline Rational gamma_n(const Lattice& l, long n) {
  if (n == -1) return -1;
  if (!l.is_q()) return n;
  const Rational& p = l.params().p;
  return (pow(p, n) - pow(p, -n)) / (p - 1 / p);
}

inline Rational alpha_n(const Lattice& l, long n) {
  if (n == -1) return l.alpha();
  if (!l.is_q()) return 1;
  const Rational& p = l.params().p;
  return (pow(p, n) + pow(p, -n)) / 2;
}

/// γ_0! = 1, γ_n! = γ_1···γ_n. Index -1 is the empty product as well.
inline Rational gamma_factorial(const Lattice& l, long n) {
  Rational r = 1;
  for (long j = 1; j <= n; ++j) r *= gamma_n(l, j);
  return r;
}

inline SeqConstants seq_constants(const Lattice& l, long n) {
  if (n < -1) throw ValidationError("sequence index must be >= -1");
  return {n, gamma_n(l, n), alpha_n(l, n), gamma_factorial(l, n)};
}

}  // namespace latops
