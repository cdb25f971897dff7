#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "latops/poly.hpp"

namespace latops {

/// Seeded source of small-height rationals and polynomials. Sequences are
/// reproducible for a given seed and standard library.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : gen_(seed) {}

  /// Small-height rational a/b with |a| <= height, 1 <= b <= height.
  Rational rational(int height = 5) {
    std::uniform_int_distribution<int> num(-height, height), den(1, height);
    Rational r(num(gen_), den(gen_));
    r.canonicalize();
    return r;
  }
  Poly poly(int max_degree, int height = 5) {
    std::uniform_int_distribution<int> deg(0, max_degree);
    std::vector<Rational> c(static_cast<std::size_t>(deg(gen_)) + 1);
    for (auto& x : c) x = rational(height);
    return Poly(std::move(c));
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace latops
