#pragma once

#include <vector>

#include "latops/coherence.hpp"

/// Reference instances on the linear lattice x(s) = s, built from the Bell
/// numbers (moments of the Poisson(1) functional).
namespace latops::fixtures {

inline Lattice linear_lattice() { return quadratic_lattice(0, 1, 0); }

/// μ_0..μ_{count-1}, via B_{n+1} = Σ_k C(n,k) B_k.
inline std::vector<Rational> bell_moments(int count) {
  std::vector<Rational> b;
  for (int n = 0; n < count; ++n) {
    if (n == 0) {
      b.emplace_back(1);
      continue;
    }
    Rational s = 0;
    for (int k = 0; k < n; ++k) s += binomial(n - 1, k) * b[static_cast<std::size_t>(k)];
    b.push_back(s);
  }
  return b;
}

/// ν_n = Σ_j C(n,j) (1/2)^{n-j} μ_j.
inline std::vector<Rational> half_shift(const std::vector<Rational>& mu) {
  std::vector<Rational> nu;
  const Rational half = ratio(1, 2);
  for (std::size_t n = 0; n < mu.size(); ++n) {
    Rational s = 0;
    for (std::size_t j = 0; j <= n; ++j)
      s += binomial(static_cast<long>(n), static_cast<long>(j)) * pow(half, static_cast<long>(n - j)) * mu[j];
    nu.push_back(s);
  }
  return nu;
}

/// Moments of z·u: ν_n = μ_{n+1}.
inline std::vector<Rational> christoffel(const std::vector<Rational>& mu) {
  return {mu.begin() + 1, mu.end()};
}

namespace detail {

inline CoherenceSpec base_spec(const Functional& u, const Functional& v, int k, int m, int M, int N, int n_max) {
  const auto [dp, dq] = required_ops_depth(k, m, M, N, n_max);
  CoherenceSpec s;
  s.k = k;
  s.m = m;
  s.M = M;
  s.N = N;
  s.u = u;
  s.v = v;
  s.P = ops_from_moments(u, dp);
  s.Q = ops_from_moments(v, dq);
  return s;
}

inline std::vector<Rational> ones(long count) { return std::vector<Rational>(static_cast<std::size_t>(count), Rational(1)); }

}  // namespace detail

/// Moment count that leaves room for every check of a chain up to n_max.
inline int coherence_moment_count(int n_max) { return 2 * (n_max + 4) + 40; }

/// u = Bell, v = half-shifted u: P_n^{[1]} = Q_n, (M,N,k,m) = (0,0,1,0).
/// v carries two moments fewer than u: D_x on v gains one order, so this is
/// where both sides of every relation reach exactly the same z^j.
inline CoherenceSpec shifted_poisson(int n_max, int moments = -1) {
  if (moments < 0) moments = coherence_moment_count(n_max);
  const auto mu = bell_moments(moments);
  auto nu = half_shift(mu);
  nu.resize(nu.size() - 2);
  CoherenceSpec s = detail::base_spec(Functional(mu), Functional(nu), 1, 0, 0, 0, n_max);
  const long depth = std::max(n_max, 3) + 1;
  s.a = CoefficientTable({detail::ones(depth)});
  s.b = CoefficientTable({detail::ones(depth)});
  return s;
}

/// u = Bell, v = z·u: P_n = Q_n + e_n Q_{n-1}, (M,N,k,m) = (0,1,0,0).
/// b_{1,0} multiplies nothing and is stored as 0.
inline CoherenceSpec christoffel_pair(int n_max, int moments = -1) {
  if (moments < 0) moments = coherence_moment_count(n_max);
  const auto mu = bell_moments(moments + 1);
  CoherenceSpec s = detail::base_spec(Functional(mu), Functional(christoffel(mu)), 0, 0, 0, 1, n_max);
  const long depth = n_max + 2;
  std::vector<Rational> e(static_cast<std::size_t>(depth), Rational(0));
  for (long n = 1; n < depth; ++n) {
    const auto un = static_cast<std::size_t>(n);
    e[un] = s.v.pair(s.P.P[un] * s.Q.P[un - 1]) / s.Q.h[un - 1];
  }
  s.a = CoefficientTable({detail::ones(depth)});
  s.b = CoefficientTable({detail::ones(depth), e});
  return s;
}

/// u = Bell, v = z·u, π = z, (m,M,N) = (0,2,1),
/// c_{n,j} = <v, π P_n Q_j> / h^v_j.
inline PiCoherenceSpec pi_christoffel(int n_max, int moments = -1) {
  if (moments < 0) moments = coherence_moment_count(n_max);
  const auto mu = bell_moments(moments + 1);
  PiCoherenceSpec s;
  s.m = 0;
  s.M = 2;
  s.N = 1;
  s.pi = Poly::z();
  s.u = Functional(mu);
  s.v = Functional(christoffel(mu));
  const auto [dp, dq] = required_pi_ops_depth(s.m, s.M, s.N, n_max);
  const int rows = std::max(n_max, s.m + 2) + s.M + 1;
  s.P = ops_from_moments(s.u, std::max(dp, rows - 1));
  s.Q = ops_from_moments(s.v, std::max(dq, rows - 1 + s.N));
  for (int n = 0; n < rows; ++n) {
    std::vector<Rational> row;
    for (int j = n - s.M; j <= n + s.N; ++j) {
      if (j < 0) {
        row.emplace_back(0);
        continue;
      }
      const auto uj = static_cast<std::size_t>(j);
      row.push_back(s.v.pair(s.pi * s.P.P[static_cast<std::size_t>(n)] * s.Q.P[uj]) / s.Q.h[uj]);
    }
    s.c.push_back(std::move(row));
  }
  return s;
}

}  // namespace latops::fixtures
