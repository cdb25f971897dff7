#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "latops/poly.hpp"
#include "latops/rational.hpp"

namespace latops {

/// Outcome of one exact identity check.
///
/// Polynomial identities carry a residual polynomial. Functional identities
/// carry the residuals r_0..r_J of the pairings against z^j, where J is the
/// largest index the truncated moments can support; J < 0 means nothing was
/// checkable.
struct IdentityCheck {
  std::string name;
  std::optional<Poly> residual_poly;
  std::vector<Rational> residuals;
  long range = -1;

  bool passed() const {
    if (residual_poly) return residual_poly->is_zero();
    return range >= 0 && std::all_of(residuals.begin(), residuals.end(),
                                     [](const Rational& r) { return r == 0; });
  }
};

struct Report {
  std::vector<IdentityCheck> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed(); });
  }
  const IdentityCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
  void append(const Report& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }
};

}  // namespace latops
