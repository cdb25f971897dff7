#pragma once

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "latops/fixtures.hpp"
#include "latops/io.hpp"
#include "latops/random.hpp"

namespace latops::cli {

enum ExitCode : int { pass = 0, residual_failure = 1, input_error = 2 };

namespace detail {

using io::Json;

struct Output {
  std::string path;

  int emit(const Json& report, bool passed, std::ostream& out) const {
    if (path.empty()) {
      out << report.dump(2) << '\n';
    } else {
      io::write_file(path, report);
      out << (passed ? "PASS" : "FAIL") << ' ' << path << '\n';
    }
    return passed ? pass : residual_failure;
  }
};

inline Json header(const std::string& command, bool passed) { return Json{{"command", command}, {"passed", passed}}; }

inline Functional random_functional(RandomSource& rng, int order) {
  std::vector<Rational> m(static_cast<std::size_t>(order) + 1);
  m[0] = 1;
  for (std::size_t i = 1; i < m.size(); ++i) m[i] = rng.rational(9);
  return Functional(std::move(m));
}

struct IdentitiesArgs {
  std::string lattice;
  std::uint64_t seed = 0;
  int max_degree = 6;
  int count = 25;
  int order = 24;
};

inline int run_identities(const IdentitiesArgs& a, const Output& o, std::ostream& out) {
  const Lattice l = io::lattice_from_json(io::read_file(a.lattice));
  RandomSource rng(a.seed);
  Json trials = Json::array();
  bool passed = true;
  for (int t = 0; t < a.count; ++t) {
    const Poly f = rng.poly(a.max_degree), g = rng.poly(a.max_degree);
    const Functional u = random_functional(rng, a.order);
    Report r = check_poly_identities(l, f, g);
    r.append(check_functional_identities(l, f, u, 4));
    for (int n = 0; n <= 4; ++n) r.append(check_leibniz(l, f, u, n));
    passed = passed && r.passed();
    Json trial{{"trial", t}, {"f", io::to_json(f)}, {"g", io::to_json(g)}, {"u_order", u.order()}};
    trial["report"] = io::to_json(r);
    trials.push_back(std::move(trial));
  }
  Json report = header("identities", passed);
  report["lattice"] = io::to_json(l);
  report["seed"] = a.seed;
  report["max_degree"] = a.max_degree;
  report["trials"] = std::move(trials);
  return o.emit(report, passed, out);
}

inline int run_ops(const std::string& moments, int n_max, const Output& o, std::ostream& out) {
  const Functional u = io::functional_from_json(io::read_file(moments));
  const OPSData ops = ops_from_moments(u, n_max < 0 ? static_cast<int>(u.order() / 2) : n_max);
  Json report = header("ops", true);
  report["ops"] = io::to_json(ops);
  return o.emit(report, true, out);
}

inline Lattice lattice_or_linear(const std::string& path) {
  return path.empty() ? fixtures::linear_lattice() : io::lattice_from_json(io::read_file(path));
}

inline int run_semiclassical(const std::string& lattice, const std::string& moments, int dphi, int dpsi, int n_eq,
                             const Output& o, std::ostream& out) {
  const Lattice l = lattice_or_linear(lattice);
  const Functional u = io::functional_from_json(io::read_file(moments));
  const auto found = detect_semiclassical(l, u, dphi, dpsi, n_eq);
  Json sols = Json::array();
  for (std::size_t i = 0; i < found.solutions.size(); ++i) {
    const auto& pp = found.solutions[i];
    sols.push_back(Json{{"phi", io::to_json(pp.phi)},
                        {"psi", io::to_json(pp.psi)},
                        {"classical", pp.is_classical()},
                        {"check", io::to_json(found.residuals[i])}});
  }
  Json degenerate = Json::array();
  for (const auto& pp : found.degenerate) degenerate.push_back(Json{{"phi", io::to_json(pp.phi)}, {"psi", io::to_json(pp.psi)}});
  const bool passed = !found.solutions.empty();
  Json report = header("semiclassical", passed);
  report["range"] = found.residual_range;
  report["solutions"] = std::move(sols);
  report["degenerate"] = std::move(degenerate);
  return o.emit(report, passed, out);
}

inline int run_modification(const std::string& lattice, const std::string& mu, const std::string& nu, int d2, int d1,
                            int n_eq, const Output& o, std::ostream& out) {
  const Lattice l = lattice_or_linear(lattice);
  const Functional u = io::functional_from_json(io::read_file(mu));
  const Functional v = io::functional_from_json(io::read_file(nu));
  const auto found = solve_rational_modification(l, u, v, d2, d1, n_eq);
  Json sols = Json::array();
  for (std::size_t i = 0; i < found.solutions.size(); ++i) {
    const auto& mp = found.solutions[i];
    sols.push_back(
        Json{{"pi2", io::to_json(mp.pi2)}, {"pi1", io::to_json(mp.pi1)}, {"check", io::to_json(found.residuals[i])}});
  }
  Json degenerate = Json::array();
  for (const auto& mp : found.degenerate) degenerate.push_back(Json{{"pi2", io::to_json(mp.pi2)}, {"pi1", io::to_json(mp.pi1)}});
  const bool passed = !found.solutions.empty();
  Json report = header("modification", passed);
  report["range"] = found.residual_range;
  report["solutions"] = std::move(sols);
  report["degenerate"] = std::move(degenerate);
  return o.emit(report, passed, out);
}

inline int run_coherence(const std::string& spec, const Output& o, std::ostream& out) {
  const auto in = io::coherence_from_json(io::read_file(spec));
  const auto a = analyze_coherence(in.lattice, in.spec, in.n_max);
  Json report = header("coherence", a.passed());
  report["n_max"] = in.n_max;
  report["analysis"] = io::to_json(a);
  return o.emit(report, a.passed(), out);
}

inline int run_pi_coherence(const std::string& spec, const Output& o, std::ostream& out) {
  const auto in = io::pi_coherence_from_json(io::read_file(spec));
  const auto a = pi_coherence_pipeline(in.lattice, in.spec, in.n_max);
  Json report = header("pi-coherence", a.passed());
  report["n_max"] = in.n_max;
  report["analysis"] = io::to_json(a);
  return o.emit(report, a.passed(), out);
}

inline int run_fixture(const std::string& name, int n_max, int count, const Output& o, std::ostream& out) {
  Json j;
  if (name == "bell") {
    j = io::to_json(Functional(fixtures::bell_moments(count)));
  } else if (name == "shifted-bell") {
    j = io::to_json(Functional(fixtures::half_shift(fixtures::bell_moments(count))));
  } else if (name == "linear-lattice") {
    j = io::to_json(fixtures::linear_lattice());
  } else if (name == "shifted-poisson") {
    j = io::to_json(fixtures::linear_lattice(), fixtures::shifted_poisson(n_max), n_max);
  } else if (name == "christoffel") {
    j = io::to_json(fixtures::linear_lattice(), fixtures::christoffel_pair(n_max), n_max);
  } else if (name == "pi-christoffel") {
    j = io::to_json(fixtures::linear_lattice(), fixtures::pi_christoffel(n_max), n_max);
  } else {
    throw io::InputError("", "unknown fixture \"" + name + "\"");
  }
  if (o.path.empty()) {
    out << j.dump(2) << '\n';
  } else {
    io::write_file(o.path, j);
  }
  return pass;
}

}  // namespace detail

/// Parses `args` (program name first) and runs one command.
/// Exit codes: 0 all checks pass, 1 some check failed (the report is still
/// written), 2 bad input.
inline int run_command(const std::vector<std::string>& args, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
  CLI::App app{"Exact operator calculus and coherent-pair analysis on quadratic and q-quadratic lattices", "latops"};
  app.require_subcommand(1);
  detail::Output o;
  int status = pass;
  std::function<int()> action;

  auto add_output = [&](CLI::App* sub) { sub->add_option("-o,--output", o.path, "Write the JSON report here"); };

  detail::IdentitiesArgs ia;
  auto* ident = app.add_subcommand("identities", "Check operator identities on random inputs");
  ident->add_option("--lattice", ia.lattice, "Lattice JSON file")->required();
  ident->add_option("--seed", ia.seed, "Random seed");
  ident->add_option("--max-degree", ia.max_degree, "Degree bound for random polynomials")->check(CLI::Range(0, 8));
  ident->add_option("--count", ia.count, "Number of random trials")->check(CLI::Range(1, 1000));
  ident->add_option("--order", ia.order, "Moment order of random functionals")->check(CLI::Range(0, 200));
  add_output(ident);
  ident->callback([&] { action = [&] { return detail::run_identities(ia, o, out); }; });

  std::string moments, moments_v, lattice, spec;
  int n_max = 0, n_eq = 0, deg_a = 0, deg_b = 0, count = 40;

  auto* ops = app.add_subcommand("ops", "Monic OPS, norms and recurrence coefficients from moments");
  ops->add_option("--moments", moments, "Functional JSON file")->required();
  int ops_n_max = -1;
  ops->add_option("--n-max", ops_n_max, "Highest degree (default: all the moments allow)")
      ->check(CLI::NonNegativeNumber);
  add_output(ops);
  ops->callback([&] { action = [&] { return detail::run_ops(moments, ops_n_max, o, out); }; });

  auto* semi = app.add_subcommand("semiclassical", "Find Pearson pairs phi Dx u = psi Sx u");
  semi->add_option("--lattice", lattice, "Lattice JSON file (default x(s) = s)");
  semi->add_option("--moments", moments, "Functional JSON file")->required();
  semi->add_option("--deg-phi", deg_a, "Degree bound for phi")->required()->check(CLI::NonNegativeNumber);
  semi->add_option("--deg-psi", deg_b, "Degree bound for psi")->required()->check(CLI::NonNegativeNumber);
  semi->add_option("--n-eq", n_eq, "Impose equations for z^0..z^n_eq")->required()->check(CLI::NonNegativeNumber);
  add_output(semi);
  semi->callback([&] {
    action = [&] { return detail::run_semiclassical(lattice, moments, deg_a, deg_b, n_eq, o, out); };
  });

  auto* mod = app.add_subcommand("modification", "Find rational modifications pi2 u = pi1 v");
  mod->add_option("--lattice", lattice, "Lattice JSON file (default x(s) = s)");
  mod->add_option("--moments", moments, "Functional u")->required();
  mod->add_option("--moments-v", moments_v, "Functional v")->required();
  mod->add_option("--deg-pi2", deg_a, "Degree bound for pi2")->required()->check(CLI::NonNegativeNumber);
  mod->add_option("--deg-pi1", deg_b, "Degree bound for pi1")->required()->check(CLI::NonNegativeNumber);
  mod->add_option("--n-eq", n_eq, "Impose equations for z^0..z^n_eq")->required()->check(CLI::NonNegativeNumber);
  add_output(mod);
  mod->callback([&] {
    action = [&] { return detail::run_modification(lattice, moments, moments_v, deg_a, deg_b, n_eq, o, out); };
  });

  auto* coh = app.add_subcommand("coherence", "Coherent-pair pipeline");
  coh->require_subcommand(1);
  auto* analyze = coh->add_subcommand("analyze", "Verify the relation, build the dual relations, solve the system");
  analyze->add_option("spec,--spec", spec, "Coherence spec JSON file")->required();
  add_output(analyze);
  analyze->callback([&] { action = [&] { return detail::run_coherence(spec, o, out); }; });

  auto* pic = app.add_subcommand("pi-coherence", "pi_N-coherence pipeline");
  pic->add_option("spec,--spec", spec, "pi-coherence spec JSON file")->required();
  add_output(pic);
  pic->callback([&] { action = [&] { return detail::run_pi_coherence(spec, o, out); }; });

  std::string fixture_name;
  auto* fix = app.add_subcommand("fixture", "Write a reference input file");
  fix->add_option("name", fixture_name,
                  "bell | shifted-bell | linear-lattice | shifted-poisson | christoffel | pi-christoffel")
      ->required();
  fix->add_option("--n-max", n_max, "Range for coherence fixtures")->check(CLI::Range(0, 40));
  fix->add_option("--count", count, "Number of moments for functional fixtures")->check(CLI::Range(1, 2000));
  add_output(fix);
  fix->callback([&] { action = [&] { return detail::run_fixture(fixture_name, n_max, count, o, out); }; });

  std::vector<char*> argv;
  std::vector<std::string> storage = args;
  if (storage.empty()) storage.emplace_back("latops");
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? pass : input_error;
  }

  try {
    status = action();
  } catch (const io::InputError& e) {
    err << "latops: input error at " << e.what() << '\n';
    return input_error;
  } catch (const OrderExceeded& e) {
    err << "latops: " << e.what() << '\n';
    return input_error;
  } catch (const RegularityError& e) {
    err << "latops: " << e.what() << '\n';
    return input_error;
  } catch (const ValidationError& e) {
    err << "latops: invalid input: " << e.what() << '\n';
    return input_error;
  } catch (const Error& e) {
    err << "latops: " << e.what() << '\n';
    return input_error;
  }
  return status;
}

}  // namespace latops::cli
