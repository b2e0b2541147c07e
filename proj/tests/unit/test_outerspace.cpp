#include <cmath>

#include "helpers.hpp"
#include "haarlab/carleson.hpp"
#include "haarlab/outerspace.hpp"
#include "oracles.hpp"

using namespace haarlab;
using test::error_of;
using test::rel_close;

namespace {

TreeFunction<Rational> subtree_indicator(const ExactFiltration& f, AtomIndex i, const Rational& c = Rational(1)) {
  TreeFunction<Rational> out(f.atom_count(), Rational(0));
  for (AtomIndex j : f.atoms_below(i)) out[j] = c;
  return out;
}

}  // namespace

TEST_CASE("outer measure of subtrees and of the empty set") {
  const auto inst = test::seven();
  const auto& f = inst.tree;
  const auto nu = Measure<Rational>::reference(f);
  for (AtomIndex i = 0; i < f.atom_count(); ++i) CHECK(outer_measure(f, f.atoms_below(i), nu) == f.measure(i));
  CHECK(outer_measure(f, OuterSet{}, nu) == 0);
  // two light leaves are cheaper than their parents
  const OuterSet light{f.index_of("I2"), f.index_of("I4")};
  CHECK(outer_measure(f, light, nu) == Rational(2, 100));
  CHECK(error_of([&] { outer_measure(f, OuterSet{99}, nu); }) == ErrorKind::UnknownAtom);
}

TEST_CASE("dynamic program matches cover enumeration") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto f = rounded_tree(small_tree(seed, 12));
    Rng rng(seed);
    const auto mu = Measure<double>::with_density(f, random_density(f, rng, 0.25, 0.1, 10, 8));
    const auto brute = oracle::brute_outer_measures(f, mu.atom);
    for (std::size_t mask = 0; mask < brute.size(); ++mask) {
      std::vector<char> member(f.atom_count());
      for (AtomIndex a = 0; a < f.atom_count(); ++a) member[a] = mask >> a & 1;
      CHECK(outer_measure(f, member, mu) == brute[mask]);
    }
    // monotone and subadditive
    for (int k = 0; k < 50; ++k) {
      const auto a = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(brute.size()) - 1));
      const auto b = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(brute.size()) - 1));
      CHECK(brute[a & b] <= brute[a]);
      CHECK(brute[a | b] <= brute[a] + brute[b] + 1e-12);
    }
  }
}

TEST_CASE("sizes") {
  const auto inst = test::seven();
  const auto& f = inst.tree;
  const auto nu = Measure<Rational>::reference(f);
  const TreeFunction<Rational> c(f.atom_count(), Rational(3));
  for (AtomIndex i = 0; i < f.atom_count(); ++i) {
    CHECK(size(f, c, i, SizeSpec::sup(), nu) == 3);
    Rational below(0);
    for (AtomIndex j : f.atoms_below(i)) below += f.measure(j);
    for (double p : {1.0, 2.0, 3.0})
      CHECK(size(f, c, i, SizeSpec::power(p), nu) ==
            doctest::Approx(3 * std::pow(to_double(Rational(below / f.measure(i))), 1 / p)).epsilon(1e-14));
  }
  const AtomIndex j = f.index_of("I3");
  TreeFunction<Rational> ind(f.atom_count(), Rational(0));
  ind[j] = 1;
  for (AtomIndex i = 0; i < f.atom_count(); ++i)
    CHECK(size(f, ind, i, SizeSpec::sup(), nu) == (f.contains(i, j) ? 1.0 : 0.0));

  // S^2 against direct summation
  const auto t = small_tree(2, 12);
  Rng rng(2);
  const auto fn = random_tree_function(t, rng);
  const auto mu = Measure<double>::reference(t);
  for (AtomIndex i = 0; i < t.atom_count(); ++i) {
    double s = 0;
    for (AtomIndex k = 0; k < t.atom_count(); ++k)
      if (oracle::is_ancestor(t, i, k)) s += fn[k] * fn[k] * t.measure(k);
    CHECK(rel_close(size(t, fn, i, SizeSpec::power(2), mu), std::sqrt(s / t.measure(i)), 1e-12));
  }
  const auto zero = Measure<double>::with_density(t, LeafFunction<double>(t.leaf_count(), 0.0));
  CHECK(error_of([&] { size(t, fn, 0, SizeSpec::power(2), zero); }) == ErrorKind::ZeroMass);
  CHECK(size(t, fn, 0, SizeSpec::sup(), zero) == 0);
}

TEST_CASE("superlevel outer measure") {
  const auto inst = test::seven();
  const auto& f = inst.tree;
  const auto nu = Measure<Rational>::reference(f);
  const TreeFunction<Rational> fn{Rational(1), Rational(-2), Rational(3), Rational(0), Rational(1, 2), Rational(5),
                                  Rational(-1)};
  CHECK(superlevel_outer_measure(f, fn, Rational(5), SizeSpec::sup(), nu) == 0);
  CHECK(superlevel_outer_measure(f, fn, Rational(7), SizeSpec::sup(), nu) == 0);
  const AtomIndex j = f.index_of("J2");
  TreeFunction<Rational> ind(f.atom_count(), Rational(0));
  ind[j] = 1;
  CHECK(superlevel_outer_measure(f, ind, Rational(1, 2), SizeSpec::sup(), nu) == f.measure(j));
  CHECK(error_of([&] { superlevel_outer_measure(f, fn, Rational(1), SizeSpec::power(2), nu); }) ==
        ErrorKind::UnsupportedSize);

  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto t = rounded_tree(small_tree(seed + 50, 12));
    Rng rng(seed);
    const auto mu = Measure<double>::with_density(t, random_density(t, rng, 0.2, 0.1, 10, 8));
    const auto brute = oracle::brute_outer_measures(t, mu.atom);
    const auto g = random_tree_function(t, rng, 8);
    double previous = INFINITY;
    for (double lambda = 0; lambda <= 1.0; lambda += 1.0 / 64) {
      const double m = superlevel_outer_measure(t, g, lambda, SizeSpec::sup(), mu);
      CHECK(m == oracle::brute_superlevel(t, g, lambda, mu.atom, brute));
      CHECK(m <= previous);
      previous = m;
    }
    CHECK(superlevel_outer_measure(t, g, outer_Linf_norm(t, g, SizeSpec::sup(), mu).value, SizeSpec::sup(), mu) == 0);
  }
}

TEST_CASE("outer L^p norms") {
  const auto inst = test::seven();
  const auto& f = inst.tree;
  const auto nu = Measure<Rational>::reference(f);
  CHECK(outer_Lp_power(f, TreeFunction<Rational>(f.atom_count(), Rational(0)), 2.0, nu) == 0);
  for (AtomIndex i = 0; i < f.atom_count(); ++i)
    for (int p : {1, 2, 3}) {
      Rational expect = f.measure(i);
      for (int k = 0; k < p; ++k) expect *= Rational(3, 2);
      CHECK(outer_Lp_power(f, subtree_indicator(f, i, Rational(3, 2)), p, nu) == expect);
    }

  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto t = rounded_tree(small_tree(seed + 100, 12));
    Rng rng(seed);
    const auto mu = Measure<double>::reference(t);
    const auto g = random_tree_function(t, rng, 8);
    const auto brute = oracle::brute_outer_measures(t, mu.atom);
    const double exact = outer_Lp_power(t, g, 2.0, mu);
    CHECK(rel_close(exact, oracle::quadrature_L2_power(t, g, mu.atom, brute, 1000000), 1e-4));
    // homogeneous and monotone in |F|
    TreeFunction<double> g3(g), bigger(g);
    for (double& x : g3) x *= -3;
    for (double& x : bigger) x = std::abs(x) + 0.125;
    for (double p : {1.0, 2.0, 2.5}) {
      CHECK(rel_close(outer_Lp_norm(t, g3, p, mu), 3 * outer_Lp_norm(t, g, p, mu), 1e-12));
      CHECK(outer_Lp_norm(t, g, p, mu) <= outer_Lp_norm(t, bigger, p, mu) * (1 + 1e-12));
    }
  }
  const auto t = small_tree(1, 12);
  CHECK(error_of([&] {
          outer_Lp_power(t, TreeFunction<double>(t.atom_count(), 1.0), 0.5, Measure<double>::reference(t));
        }) == ErrorKind::InvalidArgument);
}

TEST_CASE("outer L^inf norms") {
  const auto inst = test::seven();
  const auto& f = inst.tree;
  const auto nu = Measure<Rational>::reference(f);
  const TreeFunction<Rational> c(f.atom_count(), Rational(2));
  const AtomIndex leaf = f.index_of("I1");
  CHECK(size(f, c, leaf, SizeSpec::power(1), nu) == 2);
  CHECK(outer_Linf_norm(f, c, SizeSpec::power(1), nu).value >= 2);
  TreeFunction<Rational> ind(f.atom_count(), Rational(0));
  ind[f.index_of("J1")] = 1;
  CHECK(outer_Linf_norm(f, ind, SizeSpec::sup(), nu).value == 1);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto t = small_tree(seed, 12);
    Rng rng(seed);
    const auto w = random_weight(t, rng);
    const auto tau = tau_sequence(t, w);
    CHECK(rel_close(outer_Linf_norm(t, tau, SizeSpec::power(1), Measure<double>::reference(t)).value,
                    packing_constant(t, tau).constant, 1e-12));
  }
}

TEST_CASE("duality") {
  const auto inst = test::seven();
  const auto& f = inst.tree;
  const auto nu = Measure<Rational>::reference(f);
  const TreeFunction<Rational> zero(f.atom_count(), Rational(0)), one(f.atom_count(), Rational(1));
  const auto z = duality_check(f, one, zero, nu);
  CHECK(z.lhs == 0);
  CHECK(z.rhs == 0);
  CHECK(z.holds);

  double ratio_max = 0;
  for (AtomIndex j = 0; j < f.atom_count(); ++j) {
    Rational s(0);
    for (AtomIndex k : f.atoms_below(j)) s += f.measure(k);
    ratio_max = std::max(ratio_max, to_double(Rational(s / f.measure(j))));
  }
  for (AtomIndex i = 0; i < f.atom_count(); ++i) {
    Rational s(0);
    for (AtomIndex k : f.atoms_below(i)) s += f.measure(k);
    const auto c = duality_check(f, subtree_indicator(f, i), one, nu);
    CHECK(c.lhs == doctest::Approx(to_double(s)).epsilon(1e-14));
    CHECK(c.rhs == doctest::Approx(to_double(f.measure(i)) * ratio_max).epsilon(1e-14));
    CHECK(c.holds);
  }

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto t = small_tree(seed, 16, 5, 3);
    Rng rng(seed);
    const auto mu = Measure<double>::with_density(t, random_density(t, rng, 0.2));
    CHECK(duality_check(t, random_tree_function(t, rng), random_tree_function(t, rng), mu).holds);
  }
}

TEST_CASE("reciprocal averages") {
  const auto inst = test::seven();
  const auto& f = inst.tree;
  const AtomIndex root = f.index_of("I");
  const auto c = reciprocal_average_bound(f, constant(f, Rational(5)), root);
  CHECK(c.lhs == doctest::Approx(10));
  CHECK(c.rhs == doctest::Approx(20));
  const auto u = reciprocal_average_bound(f, inst.weight.u(), root);
  CHECK(u.holds);
  CHECK(u.slack > 0);
  CHECK(error_of([&] { reciprocal_average_bound(f, constant(f, Rational(0)), root); }) == ErrorKind::InvalidArgument);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto t = small_tree(seed, 16, 5, 3);
    Rng rng(seed);
    LeafFunction<double> h(t.leaf_count());
    for (double& x : h) x = rng.log_uniform(1e-3, 1e3);
    for (AtomIndex i = 0; i < t.atom_count(); ++i) CHECK(reciprocal_average_bound(t, h, i).holds);
  }
}

TEST_CASE("bilinear and averaging embeddings") {
  const auto f = small_tree(4, 12);
  const auto nu = Measure<double>::reference(f);
  const double total = f.total_measure();
  const auto unit = Weight<double>::unit(f);
  const auto one = constant(f, 1.0), zero = constant(f, 0.0);
  const auto b = bilinear_embedding_check(f, unit, one, one);
  CHECK(b.lhs == doctest::Approx(total));
  CHECK(b.rhs == doctest::Approx(4 * total));
  const auto z = bilinear_embedding_check(f, unit, zero, zero);
  CHECK(z.lhs == 0);
  CHECK(z.rhs == 0);
  const auto a = averaging_embedding_check(f, nu, one);
  CHECK(a.lhs == doctest::Approx(std::sqrt(total)));
  CHECK(a.rhs == doctest::Approx(2 * std::sqrt(total)));

  std::size_t smallest = 0;
  for (std::size_t l = 0; l < f.leaf_count(); ++l)
    if (f.measure(f.leaves()[l]) < f.measure(f.leaves()[smallest])) smallest = l;
  const auto s = averaging_embedding_check(f, nu, indicator(f, f.leaves()[smallest]));
  CHECK(s.holds);
  MESSAGE("smallest-leaf slack " << s.slack);

  double worst_b = 0, worst_a = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto t = small_tree(seed, 20, 5, 3);
    Rng rng(seed);
    const auto w = random_weight(t, rng);
    const auto g1 = random_leaf_function(t, rng), g2 = random_leaf_function(t, rng);
    const auto bc = bilinear_embedding_check(t, w, g1, g2);
    CHECK(bc.holds);
    worst_b = std::max(worst_b, 4 * bc.lhs / bc.rhs);
    const auto mu = Measure<double>::with_density(t, random_density(t, rng, 0.2));
    const auto ac = averaging_embedding_check(t, mu, g1);
    CHECK(ac.holds);
    if (ac.rhs > 0) worst_a = std::max(worst_a, 2 * ac.lhs / ac.rhs);
  }
  MESSAGE("empirical bilinear constant " << worst_b << ", averaging constant " << worst_a);
  CHECK(worst_b <= 4);
  CHECK(worst_a <= 2);
}

TEST_CASE("maximal function") {
  const auto f = small_tree(6, 12);
  const auto nu = Measure<double>::reference(f);
  for (double v : maximal_function(f, nu, constant(f, 2.5))) CHECK(v == doctest::Approx(2.5));
  for (std::size_t l = 0; l < f.leaf_count(); ++l) {
    const auto m = maximal_function(f, nu, indicator(f, f.leaves()[l]));
    for (std::size_t k = 0; k < f.leaf_count(); ++k) {
      double expect = 0;
      for (AtomIndex a : f.ancestors_of_leaf(k))
        if (f.contains_leaf(a, l)) expect = std::max(expect, f.measure(f.leaves()[l]) / f.measure(a));
      CHECK(m[k] == doctest::Approx(expect).epsilon(1e-14));
    }
  }
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto t = small_tree(seed, 20, 5, 3);
    Rng rng(seed);
    const auto mu = Measure<double>::with_density(t, random_density(t, rng, 0.2));
    const auto g = random_leaf_function(t, rng);
    CHECK(norm_squared(maximal_function(t, mu, g), mu) <= 4 * norm_squared(g, mu) * (1 + 1e-12));
  }
}
