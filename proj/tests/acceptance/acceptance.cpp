#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "haarlab/bellman.hpp"
#include "haarlab/carleson.hpp"
#include "haarlab/counterexample.hpp"
#include "haarlab/generators.hpp"
#include "haarlab/suite.hpp"
#include "oracles.hpp"

using namespace haarlab;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

int failures = 0;

void report(int id, bool pass, const std::string& detail, double seconds) {
  if (!pass) ++failures;
  std::printf("criterion %2d %s  %s [%.1fs]\n", id, pass ? "PASS" : "FAIL", detail.c_str(), seconds);
  std::fflush(stdout);
}

std::string fmt(const char* format, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

oracle::Vec weights_of(const Weight<double>& w) { return w.w(); }

void criterion1(const SuiteConfig& cfg) {
  const auto t = Clock::now();
  const auto r = run_counterexample_criterion(cfg);
  bool oracle_ok = true;
  for (const char* text : {"0.1", "0.01", "1e-4"}) {
    const Rational e = parse_rational(text);
    const auto rep = verify_instance(build_instance(e));
    const auto ref = oracle::counterexample(to_double(e));
    oracle_ok = oracle_ok && rep.h1_norm2 == 1 && rep.h2_norm2 == Rational(1) / (1 - e) &&
                rep.a2_tree == (2 - e) * (1 - e + e * e) && close(to_double(rep.a2_unions), ref.a2_unions, 1e-9) &&
                close(rep.norm_weighted, ref.norm_weighted, 1e-9) &&
                close(rep.norm_weighted_spectral, ref.norm_weighted, 1e-9) && rep.h2_norm2 <= 2 &&
                rep.a2_tree <= 2 && rep.a2_unions <= 3 && rep.norm_weighted >= 0.5 / std::sqrt(to_double(e));
  }
  const double s = since(t);
  report(1, r.pass && oracle_ok && s < 1.0, r.summary + (oracle_ok ? "; closed forms agree" : "; closed forms DISAGREE"),
         s);
}

void criterion2(const SuiteConfig& cfg) {
  const auto t = Clock::now();
  const auto r = run_partial_sum_criterion(cfg);
  // independent norms on a sample of small instances
  std::size_t mismatches = 0;
  for (std::size_t k = 0; k < 10; ++k) {
    RandomTreeConfig tc;
    tc.seed = derive_seed(cfg.seed ^ 0x2222, k);
    tc.max_depth = 5;
    tc.max_branching = 4;
    tc.max_leaves = 30;
    const Filtration f = random_tree(tc);
    Rng rng(derive_seed(tc.seed, 1));
    const auto w = random_weight(f, rng);
    oracle::Vec wm;
    for (std::size_t l = 0; l < f.leaf_count(); ++l) wm.push_back(w.w()[l] * f.measure(f.leaves()[l]));
    for (int m = 1; m < f.depth(); ++m)
      for (int n = m; n < f.depth(); ++n) {
        const double ref = oracle::operator_norm(oracle::partial_sum(f, m, n), wm, wm);
        if (!close(partial_sum_norm(f, w, m, n), ref, 1e-8)) ++mismatches;
      }
    if (!close(a2_characteristic(f, w).value, oracle::a2(f, weights_of(w)), 1e-12)) ++mismatches;
  }
  const double s = since(t);
  report(2, r.pass && mismatches == 0 && s < 120,
         r.summary + (mismatches == 0 ? "; spectral norms match oracle" : "; oracle mismatches"), s);
}

void criterion3(const SuiteConfig& cfg) {
  const auto t = Clock::now();
  const auto r = run_constant_criterion(cfg);
  std::size_t mismatches = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const Filtration f = small_tree(derive_seed(cfg.seed ^ 0x3333, k), 12);
    Rng rng(k);
    const auto w = random_weight(f, rng);
    oracle::Vec wm;
    for (std::size_t l = 0; l < f.leaf_count(); ++l) wm.push_back(w.w()[l] * f.measure(f.leaves()[l]));
    std::vector<AtomIndex> split;
    for (AtomIndex i = 0; i < f.atom_count(); ++i)
      if (f.atom(i).splits()) split.push_back(i);
    double c3 = 0;
    for (std::size_t mask = 0; mask < (std::size_t(1) << split.size()); ++mask) {
      oracle::Vec sigma(f.atom_count(), 0.0);
      for (std::size_t j = 0; j < split.size(); ++j) sigma[split[j]] = mask >> j & 1;
      c3 = std::max(c3, oracle::operator_norm(oracle::multiplier(f, sigma), wm, wm));
    }
    const auto est = unconditional_constants(f, w, 100, 1);
    if (!close(est.c3, c3, 1e-9)) ++mismatches;
  }
  report(3, r.pass && mismatches == 0,
         r.summary + (mismatches == 0 ? "; {0,1} sup matches oracle" : "; oracle mismatches"), since(t));
}

void criterion4(const SuiteConfig& cfg) {
  const auto t = Clock::now();
  const auto r = run_linearity_criterion(cfg);
  std::size_t mismatches = 0;
  for (std::size_t k = 0; k < 5; ++k) {
    const Filtration f = small_tree(derive_seed(cfg.seed ^ 0x4444, k), 16, 5, 3);
    Rng rng(k);
    const auto w = weight_with_a2(f, rng, 50);
    oracle::Vec wm;
    for (std::size_t l = 0; l < f.leaf_count(); ++l) wm.push_back(w.w()[l] * f.measure(f.leaves()[l]));
    for (ScanMode mode : {ScanMode::ExhaustivePM, ScanMode::RandomContinuous, ScanMode::Generation}) {
      const auto rep = multiplier_norm_scan(f, w, mode, 5000, 3);
      if (!close(oracle::operator_norm(oracle::multiplier(f, rep.argmax_sigma), wm, wm), rep.max_norm, 1e-8))
        ++mismatches;
    }
  }
  const double s = since(t);
  report(4, r.pass && mismatches == 0 && s < 600,
         r.summary + (mismatches == 0 ? "; argmax norms match oracle" : "; oracle mismatches"), s);
}

void criterion5(const SuiteConfig& cfg) {
  const auto t = Clock::now();
  std::size_t cover_mismatch = 0, superlevel_mismatch = 0, quadrature_mismatch = 0, sets = 0, levels = 0;
  double worst_rel = 0;
  for (std::size_t k = 0; k < 30; ++k) {
    const std::uint64_t s = derive_seed(cfg.seed ^ 0x5005, k);
    const Filtration f = rounded_tree(small_tree(s, 12));
    Rng rng(derive_seed(s, 1));
    const auto density = random_density(f, rng, k % 3 == 0 ? 0.3 : 0.0, 1e-1, 1e1, 8);
    const auto mu = Measure<double>::with_density(f, density);
    const auto outer = oracle::brute_outer_measures(f, mu.atom);
    const std::size_t n = f.atom_count();
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
      std::vector<char> member(n, 0);
      for (std::size_t a = 0; a < n; ++a) member[a] = mask >> a & 1;
      if (outer_measure(f, member, mu) != outer[mask]) ++cover_mismatch;
      ++sets;
    }
    const auto fn = random_tree_function(f, rng, 8);
    std::vector<double> lambdas{0.0};
    for (double v : fn) {
      lambdas.push_back(std::abs(v));
      lambdas.push_back(std::abs(v) * 0.999);
    }
    for (double lambda : lambdas) {
      if (superlevel_outer_measure(f, fn, lambda, SizeSpec::sup(), mu) !=
          oracle::brute_superlevel(f, fn, lambda, mu.atom, outer))
        ++superlevel_mismatch;
      ++levels;
    }
    const double exact = outer_Lp_power(f, fn, 2.0, mu);
    const double quad = oracle::quadrature_L2_power(f, fn, mu.atom, outer, 1000000);
    const double rel = exact > 0 ? std::abs(exact - quad) / exact : std::abs(quad);
    worst_rel = std::max(worst_rel, rel);
    if (rel > 1e-4) ++quadrature_mismatch;
  }
  const bool pass = cover_mismatch + superlevel_mismatch + quadrature_mismatch == 0;
  report(5, pass,
         fmt("30 trees: %.0f cover sets, %.0f superlevels compared exactly; ", static_cast<double>(sets),
             static_cast<double>(levels)) +
             fmt("L2 vs quadrature max rel %.2e; mismatches %.0f", worst_rel,
                 static_cast<double>(cover_mismatch + superlevel_mismatch + quadrature_mismatch)),
         since(t));
}

void criterion6(const SuiteConfig& cfg) {
  const auto t = Clock::now();
  const auto r = run_outer_space_criterion(cfg);
  report(6, r.pass, r.summary, since(t));
}

void criterion7(const SuiteConfig& cfg) {
  const auto t = Clock::now();
  const auto r = run_bellman_criterion(cfg);
  // the closed-form remainder against a direct evaluation
  std::size_t mismatches = 0;
  Rng rng(cfg.seed);
  for (int k = 0; k < 2000; ++k) {
    const double q = k % 3 == 0 ? 1 : (k % 3 == 1 ? 4 : 100);
    const double x0 = rng.log_uniform(0.1, 10), y0 = rng.uniform(0.01, 1) * q / x0;
    const double x = rng.log_uniform(0.1, 10), y = rng.uniform(0.01, 1) * q / x;
    for (BellmanKind kind : {BellmanKind::B1, BellmanKind::B2}) {
      const bool second = kind == BellmanKind::B2;
      const long double ref = oracle::bellman_remainder(second, q, x0, y0, x, y);
      const long double fd = oracle::bellman_remainder(second, q, x0, y0, x, y, true);
      const double got = tangent_remainder_at(kind, q, {x0, y0}, {x, y});
      const double scale = second ? 128 * q * std::sqrt(q) * std::sqrt(q) : 4 * q;
      if (std::abs(got - static_cast<double>(ref)) > 1e-9 * scale) ++mismatches;
      if (std::abs(static_cast<double>(fd - ref)) > 1e-6 * scale) ++mismatches;
    }
  }
  const double s = since(t);
  report(7, r.pass && mismatches == 0 && s < 300,
         r.summary + (mismatches == 0 ? "; remainders match direct evaluation" : "; remainder mismatches"), s);
}

void criterion8(const SuiteConfig& cfg) {
  const auto t = Clock::now();
  const auto r = run_packing_criterion(cfg);
  std::size_t mismatches = 0;
  for (std::size_t k = 0; k < 10; ++k) {
    RandomTreeConfig tc;
    tc.seed = derive_seed(cfg.seed ^ 0x8888, k);
    tc.max_depth = 5;
    tc.max_leaves = 30;
    const Filtration f = random_tree(tc);
    Rng rng(k);
    const auto w = random_weight(f, rng);
    for (const auto& a : {rho_sequence(f, w), tau_sequence(f, w)})
      if (!close(packing_constant(f, a).constant, oracle::packing(f, a), 1e-12)) ++mismatches;
  }
  report(8, r.pass && mismatches == 0,
         r.summary + (mismatches == 0 ? "; packing matches oracle" : "; packing oracle mismatches"), since(t));
}

void criterion9(const SuiteConfig& cfg) {
  const auto t = Clock::now();
  const auto r = run_t1_criterion(cfg);
  report(9, r.pass, r.summary, since(t));
}

void criterion10(const SuiteConfig& cfg) {
  const auto t = Clock::now();
  const auto r = run_sigma_criterion(cfg);
  report(10, r.pass, r.summary, since(t));
}

}  // namespace

int main() {
  SuiteConfig cfg;
  criterion1(cfg);
  criterion2(cfg);
  criterion3(cfg);
  criterion4(cfg);
  criterion5(cfg);
  criterion6(cfg);
  criterion7(cfg);
  criterion8(cfg);
  criterion9(cfg);
  criterion10(cfg);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
