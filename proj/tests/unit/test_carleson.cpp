#include <cmath>

#include "helpers.hpp"
#include "haarlab/carleson.hpp"
#include "oracles.hpp"

using namespace haarlab;
using test::rel_close;

TEST_CASE("sequences vanish for the unit weight") {
  const auto f = small_tree(11, 16);
  const auto w = Weight<double>::unit(f);
  for (const auto& seq : {tau_sequence(f, w), rho_sequence(f, w), gamma_sequence(f, w)})
    for (double x : seq) CHECK(x == 0);
}

TEST_CASE("seven-atom sequences") {
  const auto inst = test::seven();
  const auto& f = inst.tree;
  const auto tau = tau_sequence(f, inst.weight);
  const auto gamma = gamma_sequence(f, inst.weight);
  const auto rho = rho_sequence(f, inst.weight);
  const AtomIndex root = f.index_of("I");
  CHECK(tau[root] == 0);
  CHECK(rho[root] == 0);
  for (AtomIndex i = 0; i < f.atom_count(); ++i) {
    if (f.atom(i).is_leaf()) CHECK(tau[i] == 0);
    CHECK(tau[i] == average(f, inst.weight.w(), i) * gamma[i]);
  }
  const AtomIndex j1 = f.index_of("J1");
  CHECK(tau[j1] > 0);
  CHECK(tau[j1] == tau[f.index_of("J2")]);
}

TEST_CASE("sequences against direct formulas") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto f = small_tree(seed, 16, 5, 3);
    Rng rng(seed);
    const auto w = random_weight(f, rng);
    const auto tau = tau_sequence(f, w), rho = rho_sequence(f, w), gamma = gamma_sequence(f, w);
    const auto m = test::leaf_mass(f);
    for (AtomIndex i = 0; i < f.atom_count(); ++i) {
      const double ui = oracle::average(f, i, w.u(), m), wi = oracle::average(f, i, w.w(), m);
      double t = 0, r = 0, g = 0, du2 = 0, dw2 = 0;
      for (AtomIndex c : f.atom(i).children) {
        const double uc = oracle::average(f, c, w.u(), m), wc = oracle::average(f, c, w.w(), m);
        const double share = f.measure(c) / f.measure(i);
        t += (uc - ui) * (uc - ui) * wi * wc * share;
        r += std::abs(uc - ui) * std::abs(wc - wi) * share;
        g += (uc - ui) * (uc - ui) * wc * share;
        du2 += (uc - ui) * (uc - ui) * share;
        dw2 += (wc - wi) * (wc - wi) * share;
      }
      CHECK(tau[i] == doctest::Approx(t).epsilon(1e-10).scale(1e-12));
      CHECK(rho[i] == doctest::Approx(r).epsilon(1e-10).scale(1e-12));
      CHECK(gamma[i] == doctest::Approx(g).epsilon(1e-10).scale(1e-12));
      CHECK(rho[i] <= std::sqrt(du2 * dw2) * (1 + 1e-12) + 1e-15);
    }
  }
}

TEST_CASE("exact and float sequences agree") {
  const auto f = rounded_tree(small_tree(3, 14));
  Rng rng(3);
  LeafFunction<double> wv(f.leaf_count());
  for (double& x : wv) x = round_mantissa(rng.log_uniform(0.1, 10), 8);
  const Weight<double> w(f, wv);
  const auto ef = to_exact(f);
  const Weight<Rational> ew(ef, to_exact(wv));
  const auto tau = tau_sequence(f, w);
  const auto etau = tau_sequence(ef, ew);
  for (AtomIndex i = 0; i < f.atom_count(); ++i)
    CHECK(tau[i] == doctest::Approx(to_double(etau[i])).epsilon(1e-12).scale(1e-15));
}

TEST_CASE("packing constants") {
  const auto f = small_tree(5, 16);
  CHECK(packing_constant(f, TreeFunction<double>(f.atom_count(), 0.0)).constant == 0);
  for (AtomIndex j = 0; j < f.atom_count(); ++j) {
    TreeFunction<double> ind(f.atom_count(), 0.0);
    ind[j] = 1;
    const auto p = packing_constant(f, ind);
    CHECK(p.constant == doctest::Approx(1));
    CHECK(f.measure(p.witness) == f.measure(j));
  }
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto t = small_tree(seed, 18, 5, 3);
    Rng rng(seed);
    TreeFunction<double> a(t.atom_count()), b(t.atom_count());
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = rng.uniform();
      b[i] = a[i] + rng.uniform();
    }
    const double pa = packing_constant(t, a).constant;
    CHECK(rel_close(pa, oracle::packing(t, a), 1e-12));
    CHECK(pa <= packing_constant(t, b).constant);
    TreeFunction<double> a7(a);
    for (double& x : a7) x *= 7;
    CHECK(rel_close(packing_constant(t, a7).constant, 7 * pa, 1e-12));
  }
}

TEST_CASE("packing against a measure") {
  const auto f = small_tree(8, 16);
  Rng rng(8);
  const auto w = random_weight(f, rng);
  const auto tau = tau_sequence(f, w);
  const auto ref = Measure<double>::reference(f);
  CHECK(rel_close(packing_constant(f, tau, &ref).constant, packing_constant(f, tau).constant, 1e-12));
  const auto p = packing_constant(f, tau, &w.w_measure());
  CHECK(p.ratios.size() == f.atom_count());
  double s = 0;
  for (AtomIndex j : f.atoms_below(p.witness)) s += tau[j] * f.measure(j);
  CHECK(rel_close(p.constant, s / w.w_measure().atom[p.witness], 1e-12));
}

TEST_CASE("Carleson embedding") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto f = small_tree(seed, 20, 5, 3);
    Rng rng(seed);
    const auto w = random_weight(f, rng);
    const auto tau = tau_sequence(f, w);
    const auto g = random_leaf_function(f, rng);
    CHECK(carleson_embedding_check(f, w.w_measure(), tau, g).holds);
    CHECK(carleson_embedding_check(f, Measure<double>::reference(f), tau, g).holds);
  }
  const auto f = small_tree(1, 12);
  const auto c = carleson_embedding_check(f, Measure<double>::reference(f), TreeFunction<double>(f.atom_count(), 0.0),
                                          constant(f, 1.0));
  CHECK(c.lhs == 0);
  CHECK(c.rhs == 0);
}
