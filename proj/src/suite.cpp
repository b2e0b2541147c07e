#include "haarlab/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "haarlab/bellman.hpp"
#include "haarlab/carleson.hpp"
#include "haarlab/counterexample.hpp"
#include "haarlab/generators.hpp"
#include "haarlab/parallel.hpp"
#include "haarlab/twoweight.hpp"

namespace haarlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(const char* format, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

template <class Fn>
CriterionResult timed(int id, const std::string& name, Fn body) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r = body();
  r.id = id;
  r.name = name;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

bool le(double a, double b, double rel) { return a <= b * (1 + rel) + 1e-300; }

// Random tree with at least one split, reseeding until one appears.
Filtration suite_tree(std::uint64_t seed, int depth, int branching, std::size_t max_leaves) {
  for (std::uint64_t k = 0;; ++k) {
    RandomTreeConfig cfg;
    cfg.seed = derive_seed(seed, k);
    cfg.max_depth = depth;
    cfg.max_branching = branching;
    cfg.max_leaves = max_leaves;
    Filtration f = random_tree(cfg);
    if (has_split(f)) return f;
  }
}

}  // namespace

CriterionResult run_counterexample_criterion(const SuiteConfig& cfg) {
  return timed(1, "counterexample reproduction", [&] {
    CriterionResult r;
    r.pass = true;
    r.details = Json::array();
    const std::vector<Rational> eps{Rational(1, 10), Rational(1, 100), Rational(1, 10000)};
    for (const auto& e : eps) {
      const auto rep = verify_instance(build_instance(e), cfg.tol);
      r.pass = r.pass && rep.claims_hold;
      r.details.push_back({{"epsilon", to_double(e)},
                           {"h1_norm2", scalar_to_json(rep.h1_norm2)},
                           {"h2_norm2", scalar_to_json(rep.h2_norm2)},
                           {"a2_tree", scalar_to_json(rep.a2_tree)},
                           {"a2_unions", scalar_to_json(rep.a2_unions)},
                           {"norm_weighted", rep.norm_weighted},
                           {"norm_weighted_spectral", rep.norm_weighted_spectral},
                           {"lower_bound", rep.lower_bound},
                           {"not_multiplier", rep.not_multiplier},
                           {"claims_hold", rep.claims_hold}});
    }
    r.summary = "||T||_w at eps=1e-4: " + fmt("%.6g", r.details.back()["norm_weighted"].get<double>());
    return r;
  });
}

CriterionResult run_partial_sum_criterion(const SuiteConfig& cfg) {
  return timed(2, "partial-sum norms against [w]^{1/2}", [&] {
    struct Row {
      double a2, norm, ratio;
      int m, n;
    };
    const auto rows = parallel_map(cfg.trees, [&](std::size_t k) {
      const std::uint64_t s = derive_seed(cfg.seed ^ 0x2002, k);
      const Filtration f = suite_tree(s, cfg.depth, 4, 150);
      Rng rng(derive_seed(s, 999));
      const auto w = random_weight(f, rng);
      const double a2 = a2_characteristic(f, w).value;
      const auto pm = max_partial_sum_norm(f, w);
      return Row{a2, pm.value, pm.value / std::sqrt(a2), pm.m, pm.n};
    });
    CriterionResult r;
    r.pass = true;
    double lo = kInf, hi = 0;
    std::size_t violations = 0;
    for (const auto& row : rows) {
      lo = std::min(lo, row.ratio);
      hi = std::max(hi, row.ratio);
      if (!(le(0.5, row.ratio, 1e-8) && le(row.ratio, 2.0, 1e-8))) ++violations;
    }
    r.pass = violations == 0;
    r.details = {{"instances", rows.size()}, {"min_ratio", lo}, {"max_ratio", hi}, {"violations", violations}};
    r.summary = fmt("max_{m,n}||P_mn|| / [w]^{1/2} in [%.6g, %.6g] (allowed [0.5, 2])", lo, hi);
    return r;
  });
}

CriterionResult run_constant_criterion(const SuiteConfig& cfg) {
  return timed(3, "{0,1} and [-1,1] multiplier constants", [&] {
    const auto rows = parallel_map(cfg.constant_trees, [&](std::size_t k) {
      const std::uint64_t s = derive_seed(cfg.seed ^ 0x3003, k);
      const Filtration f = small_tree(s, 12);
      Rng rng(derive_seed(s, 999));
      const auto w = random_weight(f, rng);
      return unconditional_constants(f, w, cfg.continuous_draws, derive_seed(s, 7));
    });
    CriterionResult r;
    std::size_t violations = 0;
    double lo = kInf, hi = 0;
    for (const auto& c : rows) {
      const bool ok = c.c4_sampled >= c.c3 * (1 - 1e-6) && le(c.c4_sampled, 2 * c.c3, 1e-9) &&
                      le(c.c3, c.c4_exact, 1e-9) && le(c.c4_exact, 2 * c.c3, 1e-9);
      if (!ok) ++violations;
      lo = std::min(lo, c.c4_sampled / c.c3);
      hi = std::max(hi, c.c4_exact / c.c3);
    }
    r.pass = violations == 0;
    r.details = {{"instances", rows.size()},
                 {"min_sampled_over_c3", lo},
                 {"max_exact_over_c3", hi},
                 {"violations", violations}};
    r.summary = fmt("C4/C3 in [%.6g, %.6g]", lo, hi);
    return r;
  });
}

CriterionResult run_linearity_criterion(const SuiteConfig& cfg) {
  return timed(4, "multiplier norm over [w]_{A2}", [&] {
    struct Row {
      double a2 = 0, best = 0, ratio = 0;
      std::string mode;
    };
    const auto rows = parallel_map(cfg.scan_instances, [&](std::size_t k) {
      const std::uint64_t s = derive_seed(cfg.seed ^ 0x4004, k);
      Rng rng(derive_seed(s, 999));
      const Filtration f = k % 2 == 0 ? small_tree(s, 20, 5, 3) : suite_tree(s, std::min(cfg.depth, 6), 4, 40);
      const double target = rng.log_uniform(1, 1e3);
      const auto w = weight_with_a2(f, rng, target);
      Row row;
      row.a2 = a2_characteristic(f, w).value;
      std::vector<ScanMode> modes{ScanMode::RandomContinuous, ScanMode::Generation};
      if (f.atom_count() <= kExhaustiveAtomLimit) {
        modes.push_back(ScanMode::Exhaustive01);
        modes.push_back(ScanMode::ExhaustivePM);
      }
      for (ScanMode m : modes) {
        ScanReport rep;
        try {
          rep = multiplier_norm_scan(f, w, m, m == ScanMode::RandomContinuous ? 2000 : 1u << 20, derive_seed(s, 1));
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::BudgetExceeded) throw;
          continue;
        }
        if (rep.max_norm > row.best) {
          row.best = rep.max_norm;
          row.mode = to_string(m);
        }
      }
      row.ratio = row.best / row.a2;
      return row;
    });
    CriterionResult r;
    double worst = 0, a2_lo = kInf, a2_hi = 0;
    std::string worst_mode;
    std::size_t violations = 0;
    for (const auto& row : rows) {
      if (!std::isfinite(row.ratio) || row.ratio > 100) ++violations;
      if (row.ratio > worst) {
        worst = row.ratio;
        worst_mode = row.mode;
      }
      a2_lo = std::min(a2_lo, row.a2);
      a2_hi = std::max(a2_hi, row.a2);
    }
    r.pass = violations == 0;
    r.details = {{"instances", rows.size()}, {"max_ratio", worst},     {"max_ratio_mode", worst_mode},
                 {"a2_min", a2_lo},          {"a2_max", a2_hi},        {"sentinel", 100},
                 {"violations", violations}};
    r.summary = fmt("max ||T_sigma||_w / [w]_{A2} = %.6g over [w] in [%.4g, %.4g]", worst, a2_lo, a2_hi);
    return r;
  });
}

CriterionResult run_outer_space_criterion(const SuiteConfig& cfg) {
  return timed(6, "outer-space embedding constants", [&] {
    struct Row {
      bool duality, reciprocal, bilinear, averaging, maximal;
      double reciprocal_ratio, bilinear_ratio, averaging_ratio, maximal_ratio;
    };
    auto ratio = [](const InequalityCheck& c, double constant) { return c.rhs > 0 ? constant * c.lhs / c.rhs : 0.0; };
    const auto rows = parallel_map(cfg.draws, [&](std::size_t k) {
      const std::uint64_t s = derive_seed(cfg.seed ^ 0x6006, k);
      const Filtration f = suite_tree(s, 5, 3, 30);
      Rng rng(derive_seed(s, 999));
      const auto mu = Measure<double>::with_density(f, random_density(f, rng, 0.2));
      const auto fn = random_tree_function(f, rng);
      const auto gn = random_tree_function(f, rng);
      const auto w = random_weight(f, rng);
      const auto lf = random_leaf_function(f, rng);
      const auto lg = random_leaf_function(f, rng);
      LeafFunction<double> h(f.leaf_count());
      for (double& x : h) x = rng.log_uniform(1e-3, 1e3);
      const AtomIndex i0 = static_cast<AtomIndex>(rng.uniform_int(0, static_cast<std::int64_t>(f.atom_count()) - 1));

      Row row{};
      row.duality = duality_check(f, fn, gn, mu).holds;
      const auto rc = reciprocal_average_bound(f, h, i0);
      row.reciprocal = rc.holds;
      row.reciprocal_ratio = ratio(rc, 2);
      const auto bc = bilinear_embedding_check(f, w, lf, lg);
      row.bilinear = bc.holds;
      row.bilinear_ratio = ratio(bc, 4);
      const auto ac = averaging_embedding_check(f, mu, lf);
      row.averaging = ac.holds;
      row.averaging_ratio = ratio(ac, 2);
      const double mf = std::sqrt(norm_squared(maximal_function(f, mu, lf), mu));
      const double nf = std::sqrt(norm_squared(lf, mu));
      row.maximal = le(mf, 2 * nf, 1e-9);
      row.maximal_ratio = nf > 0 ? mf / nf : 0;
      return row;
    });
    CriterionResult r;
    std::size_t v[5] = {0, 0, 0, 0, 0};
    double c[4] = {0, 0, 0, 0};
    for (const auto& row : rows) {
      v[0] += !row.duality;
      v[1] += !row.reciprocal;
      v[2] += !row.bilinear;
      v[3] += !row.averaging;
      v[4] += !row.maximal;
      c[0] = std::max(c[0], row.reciprocal_ratio);
      c[1] = std::max(c[1], row.bilinear_ratio);
      c[2] = std::max(c[2], row.averaging_ratio);
      c[3] = std::max(c[3], row.maximal_ratio);
    }
    r.pass = v[0] + v[1] + v[2] + v[3] + v[4] == 0;
    r.details = {{"draws", rows.size()},
                 {"violations",
                  {{"duality", v[0]}, {"reciprocal_average", v[1]}, {"bilinear_embedding", v[2]},
                   {"averaging_embedding", v[3]}, {"maximal_function", v[4]}}},
                 {"empirical_constants",
                  {{"reciprocal_average", c[0]}, {"bilinear_embedding", c[1]}, {"averaging_embedding", c[2]},
                   {"maximal_function", c[3]}}}};
    r.summary = fmt("empirical constants: reciprocal %.4g (<=2), bilinear %.4g (<=4), averaging %.4g (<=2)", c[0], c[1],
                    c[2]) +
                fmt(", maximal %.4g (<=2)", c[3]);
    return r;
  });
}

CriterionResult run_bellman_criterion(const SuiteConfig& cfg) {
  return timed(7, "Bellman certificates", [&] {
    CriterionResult r;
    r.pass = true;
    Json certs = Json::array();
    SamplerConfig sc;
    sc.samples_per_region = cfg.bellman_samples;
    double b1_min = kInf;
    for (double q : {1.0, 4.0, 100.0}) {
      for (BellmanKind kind : {BellmanKind::B1, BellmanKind::B2}) {
        const auto list = kind == BellmanKind::B1 ? certify_lemma_bell1(q, sc) : certify_lemma_bell2(q, sc);
        for (const auto& c : list) {
          r.pass = r.pass && c.pass;
          if (kind == BellmanKind::B1) b1_min = std::min(b1_min, c.min_ratio);
          certs.push_back({{"kind", to_string(kind)},
                           {"q", q},
                           {"region", to_string(c.region)},
                           {"samples", c.n_samples},
                           {"min_ratio", c.n_samples ? Json(c.min_ratio) : Json(nullptr)},
                           {"floor", c.c_floor},
                           {"pass", c.pass}});
        }
      }
    }
    Rational residual(0);
    std::size_t checked = 0;
    for (std::size_t k = 0; k < 10; ++k) {
      const std::uint64_t s = derive_seed(cfg.seed ^ 0x7007, k);
      const Filtration f = suite_tree(s, 4, 3, 20);
      Rng rng(derive_seed(s, 999));
      const auto w = random_weight(f, rng);
      for (BellmanKind kind : {BellmanKind::B1, BellmanKind::B2})
        for (AtomIndex root : f.roots()) {
          residual += telescoping_check(f, w, kind, root).identity_residual;
          ++checked;
        }
    }
    r.pass = r.pass && residual == 0;
    r.details = {{"certificates", certs}, {"identity_checks", checked}, {"identity_residual", residual.str()}};
    r.summary = fmt("B1 min ratio %.10g; telescoping identity residual ", b1_min) + residual.str();
    return r;
  });
}

CriterionResult run_packing_criterion(const SuiteConfig& cfg) {
  return timed(8, "Carleson packing via telescoping", [&] {
    struct Row {
      std::size_t failures = 0, embedding_failures = 0;
      double rho_over_q = 0, tau_over_q2 = 0;
      double rho_bound = 0, tau_bound = 0;
      bool packing_ok = true;
    };
    const auto rows = parallel_map(cfg.trees, [&](std::size_t k) {
      const std::uint64_t s = derive_seed(cfg.seed ^ 0x8008, k);
      const Filtration f = suite_tree(s, cfg.depth, 4, 60);
      Rng rng(derive_seed(s, 999));
      const auto w = random_weight(f, rng);
      Row row;
      const auto b1 = telescoping_checks(f, w, BellmanKind::B1);
      const auto b2 = telescoping_checks(f, w, BellmanKind::B2);
      for (AtomIndex i = 0; i < f.atom_count(); ++i) row.failures += !b1[i].holds + !b2[i].holds;
      const double q = b1[0].q;
      const auto rho = rho_sequence(f, w);
      const auto tau = tau_sequence(f, w);
      const double kr = packing_constant(f, rho).constant;
      const double kt = packing_constant(f, tau).constant;
      row.rho_over_q = kr / q;
      row.tau_over_q2 = kt / (q * q);
      row.rho_bound = 4 * q / b1[0].c_floor;
      row.tau_bound = 128 * q * q / b2[0].c_floor;
      row.packing_ok = le(kr, row.rho_bound, 1e-9) && le(kt, row.tau_bound, 1e-9);
      const auto fn = random_leaf_function(f, rng);
      for (const Measure<double>* mu : {&w.w_measure(), &w.u_measure()}) {
        for (const TreeFunction<double>* a : {&rho, &tau})
          row.embedding_failures += !carleson_embedding_check(f, *mu, *a, fn).holds;
      }
      return row;
    });
    CriterionResult r;
    std::size_t failures = 0, emb = 0, packing = 0;
    double rq = 0, tq = 0;
    for (const auto& row : rows) {
      failures += row.failures;
      emb += row.embedding_failures;
      packing += !row.packing_ok;
      rq = std::max(rq, row.rho_over_q);
      tq = std::max(tq, row.tau_over_q2);
    }
    r.pass = failures + emb + packing == 0;
    const double c1 = std::min(bellman_floor(BellmanKind::B1, BellmanRegion::SameSign),
                               bellman_floor(BellmanKind::B1, BellmanRegion::OppositeSign));
    const double c2 = std::min({bellman_floor(BellmanKind::B2, BellmanRegion::SameSign),
                                bellman_floor(BellmanKind::B2, BellmanRegion::Bounded),
                                bellman_floor(BellmanKind::B2, BellmanRegion::Hard)});
    r.details = {{"instances", rows.size()},
                 {"max_packing_rho_over_a2", rq},
                 {"max_packing_tau_over_a2_squared", tq},
                 {"rho_bound_over_a2", 4 / c1},
                 {"tau_bound_over_a2_squared", 128 / c2},
                 {"telescoping_failures", failures},
                 {"packing_failures", packing},
                 {"embedding_failures", emb}};
    r.summary = fmt("packing(rho)/[w] <= %.4g (bound %.4g), packing(tau)/[w]^2 <= %.4g", rq, 4 / c1, tq) +
                fmt(" (bound %.4g)", 128 / c2);
    return r;
  });
}

CriterionResult run_t1_criterion(const SuiteConfig& cfg) {
  return timed(9, "two-weight T(1) bound and paraproducts", [&] {
    struct Row {
      bool t1 = true, pi1 = true, diag = true, residual = true, annihilation = true;
      double ratio = 0, residual_rel = 0;
    };
    auto instance = [&](std::uint64_t s, bool exact, Filtration& f, MultiplierSymbol<double>& sigma,
                        LeafFunction<double>& d1, LeafFunction<double>& d2) {
      f = exact ? rounded_tree(small_tree(s, 10, 4, 3)) : small_tree(s, 24, 5, 3);
      Rng rng(derive_seed(s, 999));
      const int bits = exact ? 10 : 0;
      sigma = random_symbol(f, rng, bits);
      d1 = random_density(f, rng, 0.2, 1e-2, 1e2, bits);
      d2 = random_density(f, rng, 0.2, 1e-2, 1e2, bits);
    };
    const auto floats = parallel_map(cfg.draws, [&](std::size_t k) {
      Filtration f;
      MultiplierSymbol<double> sigma;
      LeafFunction<double> d1, d2;
      instance(derive_seed(cfg.seed ^ 0x9009, k), false, f, sigma, d1, d2);
      const auto pair = MeasurePair<double>::from_densities(f, d1, d2);
      Row row;
      const auto c = t1_bound_check(f, sigma, pair);
      row.t1 = c.holds;
      row.ratio = c.bound > 0 ? c.norm / c.bound : 0;
      const auto p = paraproduct_decompose(f, sigma, pair);
      double scale = 0;
      for (Eigen::Index i = 0; i < p.t.size(); ++i) scale = std::max(scale, std::abs(p.t.data()[i]));
      row.residual_rel = scale > 0 ? p.residual / scale : p.residual;
      row.residual = row.residual_rel < 1e-9;
      row.annihilation = (scale > 0 ? p.annihilation / scale : p.annihilation) < 1e-9;
      row.pi1 = p.pi1_bound;
      row.diag = p.diag_bound;
      return row;
    });
    const auto exact = parallel_map(cfg.exact_instances, [&](std::size_t k) {
      Filtration f;
      MultiplierSymbol<double> sigma;
      LeafFunction<double> d1, d2;
      instance(derive_seed(cfg.seed ^ 0x9119, k), true, f, sigma, d1, d2);
      const ExactFiltration ef = to_exact(f);
      const MultiplierSymbol<Rational> es(ef, to_exact(sigma.coefficients()));
      const auto pair = MeasurePair<Rational>::from_densities(ef, to_exact(d1), to_exact(d2));
      Row row;
      const auto p = paraproduct_decompose(ef, es, pair);
      row.residual = p.residual == 0;
      row.annihilation = p.annihilation == 0;
      row.pi1 = p.pi1_bound;
      row.diag = p.diag_bound;
      const auto c = t1_bound_check(ef, es, pair);
      row.t1 = c.holds;
      row.ratio = c.bound > 0 ? c.norm / c.bound : 0;
      return row;
    });
    std::size_t v[5] = {0, 0, 0, 0, 0};
    double worst = 0, worst_residual = 0;
    for (const auto* rows : {&floats, &exact})
      for (const auto& row : *rows) {
        v[0] += !row.t1;
        v[1] += !row.pi1;
        v[2] += !row.diag;
        v[3] += !row.residual;
        v[4] += !row.annihilation;
        worst = std::max(worst, row.ratio);
        worst_residual = std::max(worst_residual, row.residual_rel);
      }
    CriterionResult r;
    r.pass = v[0] + v[1] + v[2] + v[3] + v[4] == 0;
    r.details = {{"float_instances", floats.size()},
                 {"rational_instances", exact.size()},
                 {"max_norm_over_bound", worst},
                 {"max_float_residual", worst_residual},
                 {"violations",
                  {{"t1_bound", v[0]}, {"pi1_bound", v[1]}, {"diag_bound", v[2]}, {"residual", v[3]},
                   {"annihilation", v[4]}}}};
    r.summary = fmt("max norm / (2[mu1,mu2]^{1/2} + 5A) = %.4g; float residual <= %.3g", worst, worst_residual) +
                "; rational residual 0";
    return r;
  });
}

CriterionResult run_sigma_criterion(const SuiteConfig& cfg) {
  return timed(10, "bilinear form decomposition", [&] {
    struct Row {
      bool exact = true, sigma1 = true, chain = true;
      double sigma1_ratio = 0;
    };
    const auto rows = parallel_map(cfg.draws, [&](std::size_t k) {
      const std::uint64_t s = derive_seed(cfg.seed ^ 0xa00a, k);
      const Filtration f = rounded_tree(small_tree(s, 12, 4, 3));
      Rng rng(derive_seed(s, 999));
      LeafFunction<double> w(f.leaf_count());
      for (double& x : w) x = round_mantissa(rng.log_uniform(1e-2, 1e2), 10);
      const ExactFiltration ef = to_exact(f);
      const Weight<Rational> ew(ef, to_exact(w));
      const auto fn = to_exact(random_leaf_function(f, rng, 10));
      const auto gn = to_exact(random_leaf_function(f, rng, 10));
      const auto d = bilinear_sigma_decomposition(ef, ew, fn, gn);
      Row row;
      row.exact = d.vanishing_residual == 0 && d.split_residual == 0;
      row.sigma1 = d.sigma1 <= d.sigma1_bound * (1 + 1e-12);
      row.chain = d.holds;
      row.sigma1_ratio = d.sigma1_bound > 0 ? d.sigma1 / d.sigma1_bound : 0;
      return row;
    });
    std::size_t v[3] = {0, 0, 0};
    double worst = 0;
    for (const auto& row : rows) {
      v[0] += !row.exact;
      v[1] += !row.sigma1;
      v[2] += !row.chain;
      worst = std::max(worst, row.sigma1_ratio);
    }
    CriterionResult r;
    r.pass = v[0] + v[1] + v[2] == 0;
    r.details = {{"draws", rows.size()},
                 {"max_sigma1_over_bound", worst},
                 {"violations", {{"identities", v[0]}, {"sigma1", v[1]}, {"chain", v[2]}}}};
    r.summary = fmt("identities exact; max Sigma1 / ([w]^{1/2}||f|| ||g||) = %.4g", worst);
    return r;
  });
}

std::vector<CriterionResult> run_suite(const SuiteConfig& cfg) {
  return {run_counterexample_criterion(cfg), run_partial_sum_criterion(cfg), run_constant_criterion(cfg),
          run_linearity_criterion(cfg),      run_outer_space_criterion(cfg), run_bellman_criterion(cfg),
          run_packing_criterion(cfg),        run_t1_criterion(cfg),          run_sigma_criterion(cfg)};
}

Json to_json(const CriterionResult& r) {
  return {{"criterion", r.id}, {"name", r.name}, {"pass", r.pass}, {"summary", r.summary}, {"details", r.details}};
}

}  // namespace haarlab
