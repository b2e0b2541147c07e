#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "haarlab/bellman.hpp"
#include "haarlab/carleson.hpp"
#include "haarlab/counterexample.hpp"
#include "haarlab/generators.hpp"
#include "haarlab/suite.hpp"
#include "haarlab/tree_io.hpp"
#include "haarlab/twoweight.hpp"

using namespace haarlab;

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitError = 2;

struct Options {
  std::string tree, weight, sigma, mu1, mu2, function, instance, out, mode = "exhaustive-pm", backend = "float";
  std::vector<std::string> eps;
  std::vector<double> q;
  std::uint64_t seed = 1;
  std::uint64_t budget = 100000;
  double tol = 1e-9;
  std::size_t trees = 50;
  int depth = 6;
  bool quick = false;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(o.out, text);
  }
}

int finish(const Options& o, Json report, bool ok) {
  report["holds"] = ok;
  emit(o, report.dump(2) + "\n");
  if (!ok) std::cerr << "assertion failed; witness:\n" << report.dump(2) << "\n";
  return ok ? 0 : kExitViolation;
}

const std::string& need(const std::string& path, const char* flag) {
  if (path.empty()) throw Error(ErrorKind::InvalidArgument, std::string("missing ") + flag);
  return path;
}

template <Scalar S>
BasicFiltration<S> load_tree(const Options& o) {
  return build_tree(tree_spec_from_json<S>(read_json_file(need(o.tree, "--tree"))));
}

template <Scalar S>
Weight<S> load_weight(const BasicFiltration<S>& f, const Options& o) {
  if (o.weight.empty()) return Weight<S>::unit(f);
  return Weight<S>(f, leaf_function_from_json(f, read_json_file(o.weight)));
}

template <Scalar S>
MultiplierSymbol<S> load_sigma(const BasicFiltration<S>& f, const std::string& path) {
  return MultiplierSymbol<S>(f, tree_function_from_json(f, read_json_file(need(path, "--sigma"))));
}

bool exact(const Options& o) {
  if (o.backend == "rational") return true;
  if (o.backend == "float") return false;
  throw Error(ErrorKind::InvalidArgument, "backend must be rational or float");
}

template <Scalar S>
int cmd_a2(const Options& o) {
  const auto f = load_tree<S>(o);
  const auto w = load_weight(f, o);
  const auto a2 = a2_characteristic(f, w);
  Json rep{{"command", "a2"},
           {"checks", "A2 characteristic over all atoms"},
           {"backend", o.backend},
           {"a2", scalar_to_json(a2.value)},
           {"a2_float", to_double(a2.value)},
           {"argmax", f.atom(a2.argmax).id}};
  return finish(o, rep, true);
}

int cmd_norm(const Options& o) {
  const auto f = load_tree<double>(o);
  const auto w = load_weight(f, o);
  const double a2 = a2_characteristic(f, w).value;
  Json rep{{"command", "norm"}, {"checks", "weighted multiplier norm; two-sided partial-sum bound"}, {"a2", a2}};
  if (!o.sigma.empty()) {
    const double n = operator_norm(multiplier_operator(f, load_sigma(f, o.sigma), w));
    rep["norm"] = n;
    rep["norm_over_a2"] = n / a2;
  }
  const auto pm = max_partial_sum_norm(f, w);
  const double root = std::sqrt(a2);
  rep["partial_sum_max"] = {{"value", pm.value}, {"m", pm.m}, {"n", pm.n}, {"over_sqrt_a2", pm.value / root}};
  const bool ok = pm.value >= 0.5 * root * (1 - 1e-8) && pm.value <= 2 * root * (1 + 1e-8);
  return finish(o, rep, ok);
}

int cmd_scan(const Options& o) {
  const auto f = load_tree<double>(o);
  const auto w = load_weight(f, o);
  const auto mode = parse_scan_mode(o.mode);
  const auto rep = multiplier_norm_scan(f, w, mode, o.budget, o.seed);
  Json sigma = Json::object();
  for (AtomIndex i = 0; i < f.atom_count(); ++i)
    if (rep.argmax_sigma[i] != 0) sigma[f.atom(i).id] = rep.argmax_sigma[i];
  Json out{{"command", "scan"},
           {"checks", "supremum of weighted multiplier norms over a symbol family"},
           {"mode", to_string(rep.mode)},
           {"seed", rep.seed},
           {"evaluated", rep.evaluated},
           {"max_norm", rep.max_norm},
           {"a2", rep.a2},
           {"ratio", rep.ratio},
           {"argmax_sigma", sigma}};
  return finish(o, out, std::isfinite(rep.max_norm));
}

int cmd_carleson(const Options& o) {
  const auto f = load_tree<double>(o);
  const auto w = load_weight(f, o);
  const double a2 = a2_characteristic(f, w).value;
  auto packing = [&](const TreeFunction<double>& a, const Measure<double>* mu) {
    const auto p = packing_constant(f, a, mu);
    return Json{{"constant", p.constant}, {"witness", f.atom(p.witness).id}};
  };
  const auto rho = rho_sequence(f, w);
  const auto tau = tau_sequence(f, w);
  Json rep{{"command", "carleson"},
           {"checks", "packing of tau, rho, gamma; telescoping Bellman bound per atom"},
           {"a2", a2},
           {"tau", packing(tau, nullptr)},
           {"rho", packing(rho, nullptr)},
           {"gamma", packing(gamma_sequence(f, w), &w.u_measure())}};
  bool ok = true;
  Json failures = Json::array();
  for (BellmanKind kind : {BellmanKind::B1, BellmanKind::B2}) {
    const auto all = telescoping_checks(f, w, kind);
    double worst = 0;
    for (AtomIndex i = 0; i < all.size(); ++i) {
      if (all[i].carleson_bound > 0) worst = std::max(worst, all[i].carleson_sum / all[i].carleson_bound);
      if (!all[i].holds) {
        ok = false;
        failures.push_back({{"kind", to_string(kind)},
                            {"atom", f.atom(i).id},
                            {"carleson_sum", all[i].carleson_sum},
                            {"carleson_bound", all[i].carleson_bound},
                            {"identity_residual", all[i].identity_residual.str()}});
      }
    }
    rep["telescoping_" + to_string(kind)] = {{"c_floor", all[0].c_floor}, {"max_sum_over_bound", worst}};
  }
  rep["rho"]["bound"] = 4 * std::max(1.0, a2) / telescoping_checks(f, w, BellmanKind::B1)[0].c_floor;
  rep["failures"] = failures;
  return finish(o, rep, ok);
}

int cmd_outer(const Options& o) {
  const auto f = load_tree<double>(o);
  const auto w = load_weight(f, o);
  Rng rng(o.seed);
  const auto mu = o.mu1.empty() ? Measure<double>::reference(f)
                                : Measure<double>::with_density(f, leaf_function_from_json(f, read_json_file(o.mu1)));
  const TreeFunction<double> fn =
      o.function.empty() ? random_tree_function(f, rng) : tree_function_from_json(f, read_json_file(o.function));
  const auto gn = random_tree_function(f, rng);
  const auto lf = random_leaf_function(f, rng);
  const auto lg = random_leaf_function(f, rng);
  LeafFunction<double> h(f.leaf_count());
  for (double& x : h) x = rng.log_uniform(1e-3, 1e3);

  auto check = [](const InequalityCheck& c) {
    return Json{{"lhs", c.lhs}, {"rhs", c.rhs}, {"slack", c.slack}, {"holds", c.holds}};
  };
  const auto inf = outer_Linf_norm(f, fn, SizeSpec::sup(), mu);
  Json rep{{"command", "outer"},
           {"checks", "outer L^p norms; duality, reciprocal average, bilinear and averaging embeddings"},
           {"seed", o.seed},
           {"L1", outer_Lp_norm(f, fn, 1.0, mu)},
           {"L2", outer_Lp_norm(f, fn, 2.0, mu)},
           {"Linf", inf.value}};
  std::vector<InequalityCheck> checks{duality_check(f, fn, gn, mu), bilinear_embedding_check(f, w, lf, lg),
                                      averaging_embedding_check(f, mu, lf)};
  for (AtomIndex r : f.roots()) checks.push_back(reciprocal_average_bound(f, h, r));
  const char* names[] = {"duality", "bilinear_embedding", "averaging_embedding"};
  bool ok = true;
  for (std::size_t k = 0; k < checks.size(); ++k) {
    const std::string name = k < 3 ? names[k] : "reciprocal_average_" + f.atom(f.roots()[k - 3]).id;
    rep[name] = check(checks[k]);
    ok = ok && checks[k].holds;
  }
  return finish(o, rep, ok);
}

int cmd_bellman(const Options& o) {
  SamplerConfig sc;
  sc.samples_per_region = o.budget;
  const std::vector<double> qs = o.q.empty() ? std::vector<double>{1, 4, 100} : o.q;
  Json certs = Json::array();
  bool ok = true;
  for (double q : qs)
    for (BellmanKind kind : {BellmanKind::B1, BellmanKind::B2}) {
      const auto list = kind == BellmanKind::B1 ? certify_lemma_bell1(q, sc) : certify_lemma_bell2(q, sc);
      for (const auto& c : list) {
        ok = ok && c.pass;
        certs.push_back({{"kind", to_string(kind)},
                         {"q", q},
                         {"region", to_string(c.region)},
                         {"samples", c.n_samples},
                         {"min_ratio", c.n_samples ? Json(c.min_ratio) : Json(nullptr)},
                         {"floor", c.c_floor},
                         {"witness_x0", {c.witness_x0.x, c.witness_x0.y}},
                         {"witness_x", {c.witness_x.x, c.witness_x.y}},
                         {"pass", c.pass}});
      }
    }
  return finish(o, {{"command", "bellman"}, {"checks", "tangent remainder lower bounds"}, {"certificates", certs}},
                ok);
}

template <Scalar S>
int cmd_t1(const Options& o) {
  BasicFiltration<S> f;
  MultiplierSymbol<S> sigma;
  LeafFunction<S> d1, d2;
  if (!o.instance.empty()) {
    const Json j = read_json_file(o.instance);
    for (const char* key : {"tree", "sigma", "mu1", "mu2"})
      if (!j.contains(key)) throw Error(ErrorKind::ParseError, std::string("instance bundle lacks \"") + key + "\"");
    f = build_tree(tree_spec_from_json<S>(j["tree"]));
    sigma = MultiplierSymbol<S>(f, tree_function_from_json(f, j["sigma"]));
    d1 = leaf_function_from_json(f, j["mu1"]);
    d2 = leaf_function_from_json(f, j["mu2"]);
  } else {
    f = load_tree<S>(o);
    sigma = load_sigma(f, o.sigma);
    d1 = leaf_function_from_json(f, read_json_file(need(o.mu1, "--mu1")));
    d2 = leaf_function_from_json(f, read_json_file(need(o.mu2, "--mu2")));
  }
  const auto pair = MeasurePair<S>::from_densities(f, d1, d2);
  const auto c = t1_bound_check(f, sigma, pair);
  const auto p = paraproduct_decompose(f, sigma, pair);
  double scale = 0;
  for (Eigen::Index i = 0; i < p.t.size(); ++i) scale = std::max(scale, std::abs(to_double(p.t.data()[i])));
  const double residual = to_double(p.residual);
  const bool residual_ok = is_exact_v<S> ? p.residual == S(0) : residual <= o.tol * std::max(scale, 1e-300);
  Json rep{{"command", "t1"},
           {"checks", "two-weight T(1) bound; paraproduct decomposition"},
           {"backend", o.backend},
           {"norm", c.norm},
           {"joint_a2", c.joint_a2},
           {"testing", c.testing},
           {"bound", c.bound},
           {"slack", c.slack},
           {"norm_pi1", p.norm_pi1},
           {"norm_pi2_adjoint", p.norm_pi2_adjoint},
           {"norm_diag", p.norm_diag},
           {"residual", scalar_to_json(p.residual)},
           {"annihilation", scalar_to_json(p.annihilation)},
           {"pi1_bound", p.pi1_bound},
           {"diag_bound", p.diag_bound}};
  return finish(o, rep, c.holds && p.pi1_bound && p.diag_bound && residual_ok);
}

template <Scalar S>
int cmd_sigma4(const Options& o) {
  const auto f = load_tree<S>(o);
  const auto w = load_weight(f, o);
  Rng rng(o.seed);
  LeafFunction<S> fn(f.leaf_count()), gn(f.leaf_count());
  for (auto* v : {&fn, &gn})
    for (auto& x : *v) x = from_double<S>(round_mantissa(rng.uniform(-1, 1), 10));
  const auto d = bilinear_sigma_decomposition(f, w, fn, gn);
  Json rep{{"command", "sigma4"},
           {"checks", "bilinear form split into four sums and their bounds"},
           {"backend", o.backend},
           {"seed", o.seed},
           {"sigma", {d.sigma1, d.sigma2, d.sigma3, d.sigma4}},
           {"total", d.total},
           {"vanishing_residual", scalar_to_json(d.vanishing_residual)},
           {"split_residual", scalar_to_json(d.split_residual)},
           {"sigma1_bound", d.sigma1_bound},
           {"sigma2_bound", d.sigma2_bound},
           {"sigma3_bound", d.sigma3_bound},
           {"sigma4_rho_sum", d.sigma4_rho_sum},
           {"sigma4_duality", d.sigma4_duality},
           {"sigma4_bound", d.sigma4_bound}};
  const double scale = std::max(1.0, d.f_norm * d.g_norm);
  const bool exact_ok = is_exact_v<S> ? d.vanishing_residual == S(0) && d.split_residual == S(0)
                                      : to_double(d.vanishing_residual) <= o.tol * scale &&
                                            to_double(d.split_residual) <= o.tol * scale;
  return finish(o, rep, d.holds && exact_ok);
}

int cmd_counterexample(const Options& o) {
  std::vector<Rational> eps;
  for (const auto& e : o.eps.empty() ? std::vector<std::string>{"0.01"} : o.eps) eps.push_back(parse_rational(e));
  const auto rows = sweep(eps);
  bool ok = true;
  for (const auto& r : rows) {
    if (!r.claims_hold) {
      ok = false;
      std::cerr << "claims fail for epsilon " << r.eps.str() << ": h1^2=" << r.h1_norm2.str()
                << " h2^2=" << r.h2_norm2.str() << " a2=" << r.a2_tree.str() << " a2_unions=" << r.a2_unions.str()
                << " |T|_w^2=" << r.norm_weighted2.str() << "\n";
    }
  }
  emit(o, sweep_csv(rows));
  return ok ? 0 : kExitViolation;
}

int cmd_suite(const Options& o) {
  SuiteConfig cfg;
  cfg.seed = o.seed;
  cfg.trees = o.trees;
  cfg.depth = o.depth;
  cfg.tol = o.tol;
  if (o.quick) {
    cfg.constant_trees = 5;
    cfg.continuous_draws = 2000;
    cfg.scan_instances = 20;
    cfg.draws = 100;
    cfg.exact_instances = 10;
    cfg.bellman_samples = 20000;
  }
  Json results = Json::array();
  bool ok = true;
  for (const auto& r : run_suite(cfg)) {
    ok = ok && r.pass;
    results.push_back(to_json(r));
    std::fprintf(stderr, "criterion %d %s: %s (%.1fs)\n", r.id, r.pass ? "PASS" : "FAIL", r.summary.c_str(),
                 r.seconds);
  }
  Json rep{{"command", "suite"}, {"seed", cfg.seed}, {"trees", cfg.trees}, {"depth", cfg.depth}, {"criteria", results}};
  rep["holds"] = ok;
  emit(o, rep.dump(2) + "\n");
  return ok ? 0 : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted martingale analysis on finite atomic trees"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tree", o.tree, "tree JSON file");
    sub->add_option("--weight", o.weight, "leaf weights JSON file");
    sub->add_option("--backend", o.backend, "rational or float")->check(CLI::IsMember({"rational", "float"}));
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--tol", o.tol, "relative tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out, "write the report here instead of stdout");
  };
  auto* a2 = app.add_subcommand("a2", "A2 characteristic of a weight");
  auto* norm = app.add_subcommand("norm", "weighted norm of a multiplier and of partial sums");
  auto* scan = app.add_subcommand("scan", "maximize the multiplier norm over a family of symbols");
  auto* carleson = app.add_subcommand("carleson", "packing constants and telescoping bounds");
  auto* outer = app.add_subcommand("outer", "outer L^p norms and embedding checks");
  auto* bellman = app.add_subcommand("bellman", "sampled certificates for the Bellman inequalities");
  auto* t1 = app.add_subcommand("t1", "two-weight bound on an instance");
  auto* sigma4 = app.add_subcommand("sigma4", "four-term decomposition of the bilinear form");
  auto* counter = app.add_subcommand("counterexample", "the block transform with unbounded weighted norm");
  auto* suite = app.add_subcommand("suite", "the randomized acceptance battery");
  for (auto* sub : {a2, norm, scan, carleson, outer, bellman, t1, sigma4, counter, suite}) add_common(sub);

  norm->add_option("--sigma", o.sigma, "multiplier coefficients JSON file");
  scan->add_option("--mode", o.mode, "exhaustive-01, exhaustive-pm, random-continuous or generation");
  for (auto* sub : {scan, bellman}) sub->add_option("--budget", o.budget, "pattern budget or samples per region");
  outer->add_option("--function", o.function, "tree function JSON file (random when omitted)");
  outer->add_option("--mu1", o.mu1, "density of the measure");
  bellman->add_option("--q", o.q, "values of Q (default 1 4 100)");
  t1->add_option("--sigma", o.sigma, "multiplier coefficients JSON file");
  t1->add_option("--mu1", o.mu1, "density of the first measure");
  t1->add_option("--mu2", o.mu2, "density of the second measure");
  t1->add_option("--instance", o.instance, "bundle with tree, sigma, mu1 and mu2");
  counter->add_option("--eps", o.eps, "epsilon values, decimal or fraction");
  suite->add_option("--trees", o.trees, "random trees per tree-based criterion");
  suite->add_option("--depth", o.depth, "maximum number of generations");
  suite->add_flag("--quick", o.quick, "smaller draw counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  try {
    const bool ex = exact(o);
    if (a2->parsed()) return ex ? cmd_a2<Rational>(o) : cmd_a2<double>(o);
    if (norm->parsed()) return cmd_norm(o);
    if (scan->parsed()) return cmd_scan(o);
    if (carleson->parsed()) return cmd_carleson(o);
    if (outer->parsed()) return cmd_outer(o);
    if (bellman->parsed()) return cmd_bellman(o);
    if (t1->parsed()) return ex ? cmd_t1<Rational>(o) : cmd_t1<double>(o);
    if (sigma4->parsed()) return ex ? cmd_sigma4<Rational>(o) : cmd_sigma4<double>(o);
    if (counter->parsed()) return cmd_counterexample(o);
    if (suite->parsed()) return cmd_suite(o);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
