#pragma once

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "latops/rational.hpp"

namespace latops {

/// Polynomial degree with a distinguished negative infinity for the zero
/// polynomial, so that deg(fg) = deg f + deg g holds without special cases.
class Degree {
 public:
  constexpr Degree(int value) noexcept : value_(value), neg_inf_(false) {}
  static constexpr Degree neg_infinity() noexcept { return Degree(); }

  constexpr bool is_neg_infinity() const noexcept { return neg_inf_; }
  /// Finite value; only meaningful when !is_neg_infinity().
  constexpr int value() const noexcept { return value_; }

  friend constexpr Degree operator+(Degree a, Degree b) noexcept {
    if (a.neg_inf_ || b.neg_inf_) return neg_infinity();
    return Degree(a.value_ + b.value_);
  }
  friend constexpr bool operator==(Degree a, Degree b) noexcept {
    return a.neg_inf_ == b.neg_inf_ && (a.neg_inf_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(Degree a, Degree b) noexcept {
    if (a.neg_inf_ || b.neg_inf_) return !a.neg_inf_ <=> !b.neg_inf_;
    return a.value_ <=> b.value_;
  }

 private:
  constexpr Degree() noexcept : value_(0), neg_inf_(true) {}
  int value_;
  bool neg_inf_;
};

/// Dense univariate polynomial over the rationals. Coefficients are stored
/// constant term first with no trailing zeros.
class Poly {
 public:
  Poly() = default;
  Poly(int c) : Poly(Rational(c)) {}
  Poly(const Rational& c) : coeffs_{c} { trim(); }
  Poly(std::initializer_list<Rational> coeffs) : coeffs_(coeffs) { trim(); }
  explicit Poly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  /// c·z^n
  static Poly monomial(int n, const Rational& c = 1) {
    std::vector<Rational> v(static_cast<std::size_t>(n) + 1);
    v.back() = c;
    return Poly(std::move(v));
  }
  static Poly z() { return monomial(1); }

  bool is_zero() const noexcept { return coeffs_.empty(); }
  Degree degree() const noexcept {
    return coeffs_.empty() ? Degree::neg_infinity() : Degree(static_cast<int>(coeffs_.size()) - 1);
  }
  /// Number of stored coefficients, i.e. deg + 1 (0 for the zero polynomial).
  std::size_t size() const noexcept { return coeffs_.size(); }
  const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }

  /// Coefficient of z^i, zero beyond the degree.
  Rational operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rational(0); }
  Rational leading() const { return coeffs_.empty() ? Rational(0) : coeffs_.back(); }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Poly& operator+=(const Poly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    trim();
    return *this;
  }
  Poly& operator*=(const Rational& c) {
    if (c == 0) {
      coeffs_.clear();
      return *this;
    }
    for (auto& a : coeffs_) a *= c;
    return *this;
  }
  Poly& operator/=(const Rational& c) {
    if (c == 0) throw DegenerateError("polynomial division by zero scalar");
    for (auto& a : coeffs_) a /= c;
    return *this;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) { return a *= Rational(-1); }
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
  friend Poly operator/(Poly a, const Rational& c) { return a /= c; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Poly(std::move(out));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }

  /// Euclidean division; throws on a zero divisor.
  friend std::pair<Poly, Poly> divmod(const Poly& num, const Poly& den) {
    if (den.is_zero()) throw DegenerateError("polynomial division by zero");
    Poly rem = num;
    const int dd = den.degree().value();
    if (rem.degree() < den.degree()) return {Poly{}, rem};
    std::vector<Rational> quot(rem.coeffs_.size() - den.coeffs_.size() + 1);
    const Rational& lead = den.coeffs_.back();
    while (!rem.is_zero() && rem.degree() >= den.degree()) {
      const int shift = rem.degree().value() - dd;
      const Rational c = rem.coeffs_.back() / lead;
      quot[static_cast<std::size_t>(shift)] = c;
      for (int i = 0; i <= dd; ++i) rem.coeffs_[static_cast<std::size_t>(i + shift)] -= c * den.coeffs_[static_cast<std::size_t>(i)];
      rem.trim();
    }
    return {Poly(std::move(quot)), rem};
  }

  /// Division known to be exact (Bareiss steps); throws otherwise.
  friend Poly exact_divide(const Poly& num, const Poly& den) {
    auto [q, r] = divmod(num, den);
    if (!r.is_zero()) throw DegenerateError("inexact polynomial division");
    return q;
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<Rational> coeffs_;
};

inline std::ostream& operator<<(std::ostream& os, const Poly& p) {
  if (p.is_zero()) return os << "0";
  bool first = true;
  for (std::size_t i = p.size(); i-- > 0;) {
    const Rational& c = p.coeffs()[i];
    if (c == 0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    const Rational a = abs(c);
    if (a != 1 || i == 0) os << a.get_str();
    if (i >= 1) os << "z";
    if (i >= 2) os << "^" << i;
    first = false;
  }
  return os;
}

inline std::string to_string(const Poly& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) out += (i ? ", " : "") + to_string(p.coeffs()[i]);
  return "[" + out + "]";
}

}  // namespace latops
