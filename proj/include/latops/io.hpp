#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "latops/coherence.hpp"

/// JSON encoding of lattices, functionals, coherence specs and reports.
/// Rationals are "num/den" strings; polynomials are coefficient arrays in
/// ascending degree.
namespace latops::io {

using Json = nlohmann::ordered_json;

/// Malformed input, tagged with a JSON pointer to the offending field.
class InputError : public ValidationError {
 public:
  InputError(const std::string& pointer, const std::string& what)
      : ValidationError((pointer.empty() ? std::string("/") : pointer) + ": " + what), pointer_(pointer) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

inline Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("", "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("", path + ": " + e.what());
  }
}

inline void write_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
}

namespace detail {

inline const Json& field(const Json& j, const std::string& ptr, const char* key) {
  if (!j.is_object()) throw InputError(ptr, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(ptr + "/" + key, "missing field");
  return *it;
}

inline int non_negative(const Json& j, const std::string& ptr) {
  if (!j.is_number_integer() || j.get<long long>() < 0 || j.get<long long>() > 100000)
    throw InputError(ptr, "expected a non-negative integer");
  return j.get<int>();
}

}  // namespace detail

inline Json to_json(const Rational& r) { return to_string(r); }

inline Rational rational_from_json(const Json& j, const std::string& ptr) {
  if (j.is_number_integer()) return Rational(Integer(j.dump()));
  if (!j.is_string()) throw InputError(ptr, "expected a rational string \"num/den\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const ValidationError& e) {
    throw InputError(ptr, e.what());
  }
}

inline std::vector<Rational> rationals_from_json(const Json& j, const std::string& ptr) {
  if (!j.is_array()) throw InputError(ptr, "expected an array");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rational_from_json(j[i], ptr + "/" + std::to_string(i)));
  return out;
}

inline Json to_json(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(to_string(r));
  return a;
}

inline Json to_json(const Poly& p) { return to_json(p.coeffs()); }

inline Poly poly_from_json(const Json& j, const std::string& ptr) { return Poly(rationals_from_json(j, ptr)); }

inline Json to_json(const PolyMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(const RatMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// {"kind": "q-quadratic", "p": "2", "c": ["c1","c2","c3"]} or
/// {"kind": "quadratic", "c": ["c4","c5","c6"]}.
inline Lattice lattice_from_json(const Json& j, const std::string& ptr = "") {
  const Json& kind = detail::field(j, ptr, "kind");
  const auto c = rationals_from_json(detail::field(j, ptr, "c"), ptr + "/c");
  if (c.size() != 3) throw InputError(ptr + "/c", "expected three constants");
  try {
    if (kind == "q-quadratic") return q_lattice(rational_from_json(detail::field(j, ptr, "p"), ptr + "/p"), c[0], c[1], c[2]);
    if (kind == "quadratic") return quadratic_lattice(c[0], c[1], c[2]);
  } catch (const InputError&) {
    throw;
  } catch (const ValidationError& e) {
    throw InputError(ptr, e.what());
  }
  throw InputError(ptr + "/kind", "expected \"q-quadratic\" or \"quadratic\"");
}

inline Json to_json(const Lattice& l) {
  Json j;
  j["kind"] = l.is_q() ? "q-quadratic" : "quadratic";
  if (l.is_q()) j["p"] = to_string(l.params().p);
  j["c"] = to_json(std::vector<Rational>(l.params().c.begin(), l.params().c.end()));
  return j;
}

/// {"moments": ["1", "1", "2", ...]}
inline Functional functional_from_json(const Json& j, const std::string& ptr = "") {
  auto m = rationals_from_json(detail::field(j, ptr, "moments"), ptr + "/moments");
  if (m.empty()) throw InputError(ptr + "/moments", "need at least one moment");
  return Functional(std::move(m));
}

inline Json to_json(const Functional& u) { return Json{{"moments", to_json(u.moments())}}; }

inline CoefficientTable table_from_json(const Json& j, const std::string& ptr) {
  if (!j.is_array() || j.empty()) throw InputError(ptr, "expected a non-empty array of rows");
  std::vector<std::vector<Rational>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) rows.push_back(rationals_from_json(j[i], ptr + "/" + std::to_string(i)));
  try {
    return CoefficientTable(std::move(rows));
  } catch (const ValidationError& e) {
    throw InputError(ptr, e.what());
  }
}

inline Json to_json(const CoefficientTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows()) rows.push_back(to_json(r));
  return rows;
}

inline Json to_json(const IdentityCheck& c) {
  Json j;
  j["name"] = c.name;
  j["passed"] = c.passed();
  if (c.range >= 0) j["range"] = c.range;
  if (c.passed()) return j;
  if (c.residual_poly) j["residual"] = to_json(*c.residual_poly);
  if (!c.residuals.empty()) j["residuals"] = to_json(c.residuals);
  return j;
}

inline Json to_json(const Report& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return Json{{"passed", r.passed()}, {"checks", std::move(checks)}};
}

inline Json to_json(const OPSData& ops) {
  Json P = Json::array();
  for (const auto& p : ops.P) P.push_back(to_json(p));
  return Json{{"n_max", ops.n_max()}, {"P", P}, {"h", to_json(ops.h)}, {"B", to_json(ops.B)}, {"C", to_json(ops.C)}};
}

/// A coherence spec file with its lattice and requested range.
struct CoherenceInput {
  Lattice lattice;
  CoherenceSpec spec;
  int n_max = 0;
};

/// {"lattice", "u", "v", "M", "N", "k", "m", "a", "b", "n_max"}. The OPS are
/// computed from the moments, as deep as the chain up to n_max needs.
inline CoherenceInput coherence_from_json(const Json& j) {
  CoherenceInput in{lattice_from_json(detail::field(j, "", "lattice"), "/lattice"), {}, 0};
  CoherenceSpec& s = in.spec;
  s.k = detail::non_negative(detail::field(j, "", "k"), "/k");
  s.m = detail::non_negative(detail::field(j, "", "m"), "/m");
  s.M = detail::non_negative(detail::field(j, "", "M"), "/M");
  s.N = detail::non_negative(detail::field(j, "", "N"), "/N");
  in.n_max = detail::non_negative(detail::field(j, "", "n_max"), "/n_max");
  if (s.k < s.m) throw InputError("/k", "need k >= m");
  s.u = functional_from_json(detail::field(j, "", "u"), "/u");
  s.v = functional_from_json(detail::field(j, "", "v"), "/v");
  s.a = table_from_json(detail::field(j, "", "a"), "/a");
  s.b = table_from_json(detail::field(j, "", "b"), "/b");
  const auto [dp, dq] = required_ops_depth(s.k, s.m, s.M, s.N, in.n_max);
  s.P = ops_from_moments(s.u, dp);
  s.Q = ops_from_moments(s.v, dq);
  return in;
}

inline Json to_json(const Lattice& l, const CoherenceSpec& s, int n_max) {
  Json j;
  j["lattice"] = to_json(l);
  j["u"] = to_json(s.u);
  j["v"] = to_json(s.v);
  j["M"] = s.M;
  j["N"] = s.N;
  j["k"] = s.k;
  j["m"] = s.m;
  j["a"] = to_json(s.a);
  j["b"] = to_json(s.b);
  j["n_max"] = n_max;
  return j;
}

struct PiCoherenceInput {
  Lattice lattice;
  PiCoherenceSpec spec;
  int n_max = 0;
};

/// {"lattice", "u", "v", "m", "M", "N", "pi", "c", "n_max"} with
/// c[n][t] = c_{n, n-M+t}.
inline PiCoherenceInput pi_coherence_from_json(const Json& j) {
  PiCoherenceInput in{lattice_from_json(detail::field(j, "", "lattice"), "/lattice"), {}, 0};
  PiCoherenceSpec& s = in.spec;
  s.m = detail::non_negative(detail::field(j, "", "m"), "/m");
  s.M = detail::non_negative(detail::field(j, "", "M"), "/M");
  s.N = detail::non_negative(detail::field(j, "", "N"), "/N");
  in.n_max = detail::non_negative(detail::field(j, "", "n_max"), "/n_max");
  s.pi = poly_from_json(detail::field(j, "", "pi"), "/pi");
  s.u = functional_from_json(detail::field(j, "", "u"), "/u");
  s.v = functional_from_json(detail::field(j, "", "v"), "/v");
  s.c = table_from_json(detail::field(j, "", "c"), "/c").rows();
  const auto [dp, dq] = required_pi_ops_depth(s.m, s.M, s.N, in.n_max);
  s.P = ops_from_moments(s.u, dp);
  s.Q = ops_from_moments(s.v, dq);
  return in;
}

inline Json to_json(const Lattice& l, const PiCoherenceSpec& s, int n_max) {
  Json j;
  j["lattice"] = to_json(l);
  j["u"] = to_json(s.u);
  j["v"] = to_json(s.v);
  j["m"] = s.m;
  j["M"] = s.M;
  j["N"] = s.N;
  j["pi"] = to_json(s.pi);
  Json c = Json::array();
  for (const auto& r : s.c) c.push_back(to_json(r));
  j["c"] = std::move(c);
  j["n_max"] = n_max;
  return j;
}

inline Json to_json(const TheoremSolution& t) {
  Json j;
  j["det"] = to_json(t.det);
  j["pi1"] = to_json(t.pi1);
  j["pi2"] = to_json(t.pi2);
  j["pi3"] = to_json(t.pi3);
  j["conclusions"] = Json{
      {"phi1", to_json(t.det)}, {"psi1", to_json(t.pi1)}, {"phi2", to_json(t.pi3)},
      {"psi2", to_json(t.det)}, {"phi3", to_json(t.pi3)}, {"psi3", to_json(t.pi2)}};
  j["report"] = to_json(t.report);
  return j;
}

inline Json stage(const std::string& name, bool passed, Json detail = Json::object()) {
  Json j;
  j["stage"] = name;
  j["passed"] = passed;
  for (auto& [k, v] : detail.items()) j[k] = v;
  return j;
}

inline Json to_json(const CoherenceAnalysis& a) {
  Json stages = Json::array();
  stages.push_back(stage("coherence", a.coherence.passed(), {{"report", to_json(a.coherence)}}));
  if (a.failure == "coherence") return Json{{"passed", false}, {"failure", a.failure}, {"stages", stages}};

  stages.push_back(stage("A-matrix", a.detA != 0, {{"A", to_json(a.A)}, {"det", to_string(a.detA)}}));
  if (a.failure != "A-matrix") {
    Json lemma = Json::array();
    for (std::size_t i = 0; i < a.lemma.size(); ++i) {
      const auto& cc = a.connection[i];
      lemma.push_back(Json{{"n", a.lemma[i].n},
                           {"a_prime", to_json(cc.a_prime)},
                           {"b_prime", to_json(cc.b_prime)},
                           {"psi", to_json(a.lemma[i].psi)},
                           {"phi", to_json(a.lemma[i].phi)}});
    }
    stages.push_back(stage("lemma", a.failure != "lemma", {{"entries", lemma}}));
    if (!a.dual_relations.checks.empty())
      stages.push_back(stage("dual-relation", a.dual_relations.passed(), {{"report", to_json(a.dual_relations)}}));
  }
  if (a.modification) {
    stages.push_back(stage("modification", a.modification_check->passed(),
                           {{"pi2", to_json(a.modification->pi2)},
                            {"pi1", to_json(a.modification->pi1)},
                            {"check", to_json(*a.modification_check)}}));
  }
  if (a.B) {
    stages.push_back(stage("B-matrix", a.row_equations.passed() && !a.Bdet->is_zero(),
                           {{"B", to_json(*a.B)}, {"det", to_json(*a.Bdet)}, {"row_equations", to_json(a.row_equations)}}));
  }
  if (a.theorem) stages.push_back(stage("theorem", a.theorem->report.passed(), {{"solution", to_json(*a.theorem)}}));
  Json out{{"passed", a.passed()}};
  if (!a.passed()) out["failure"] = a.failure;
  out["stages"] = std::move(stages);
  return out;
}

inline Json to_json(const PiCoherenceAnalysis& a) {
  Json stages = Json::array();
  stages.push_back(stage("relation", a.relation.passed(), {{"report", to_json(a.relation)}}));
  if (!a.rho.empty() || a.failure == "rho-degree") {
    Json rho = Json::array();
    for (const auto& r : a.rho) rho.push_back(to_json(r));
    stages.push_back(stage("rho", a.failure != "rho-degree", {{"rho", rho}}));
  }
  if (!a.intermediate.checks.empty())
    stages.push_back(stage("intermediate", a.intermediate.passed(), {{"report", to_json(a.intermediate)}}));
  if (a.modification) {
    stages.push_back(stage("modification", a.modification_check->passed(),
                           {{"pi2", to_json(a.modification->pi2)},
                            {"pi1", to_json(a.modification->pi1)},
                            {"check", to_json(*a.modification_check)}}));
  }
  if (a.C) {
    Json detail{{"C", to_json(*a.C)}, {"det", to_json(*a.Cdet)}, {"row_equations", to_json(a.row_equations)}};
    if (a.Cdet->is_zero()) detail["note"] = "determinant vanishes identically; no Cramer solve";
    stages.push_back(stage("C-matrix", a.failure != "C-determinant" && a.failure != "row-equations", detail));
  }
  if (a.solution) stages.push_back(stage("theorem", a.solution->report.passed(), {{"solution", to_json(*a.solution)}}));
  Json out{{"passed", a.passed()}};
  if (!a.passed()) out["failure"] = a.failure;
  out["stages"] = std::move(stages);
  return out;
}

}  // namespace latops::io
