#include <algorithm>

#include "helpers.hpp"

using namespace haarlab;
using test::error_of;

TEST_CASE("two leaves of measure 1/2 under one root") {
  const auto f = test::two_leaf(Rational(1, 2), Rational(1, 2));
  CHECK(f.depth() == 2);
  CHECK(f.atom_count() == 3);
  CHECK(f.measure(f.index_of("R")) == 1);
  CHECK(f.roots().size() == 1);
  CHECK(f.leaf_count() == 2);
}

TEST_CASE("seven-atom tree") {
  const auto inst = test::seven();
  const auto& f = inst.tree;
  CHECK(f.atom_count() == 7);
  CHECK(f.measure(f.index_of("I")) == 2);
  CHECK(f.measure(f.index_of("J1")) == 1);
  CHECK(f.measure(f.index_of("I2")) == Rational(1, 100));
  CHECK(f.atoms_below("I").size() == 7);
  CHECK(f.atoms_below("I3") == std::vector<AtomIndex>{f.index_of("I3")});
  CHECK(f.depth() == 3);
}

TEST_CASE("invalid descriptions") {
  TreeSpec<double> spec;
  spec.leaf_measures_only = true;
  spec.atoms = {{"R", std::nullopt, std::nullopt}, {"A", "R", 0.0}, {"B", "R", 1.0}};
  CHECK(error_of([&] { build_tree(spec); }) == ErrorKind::NonPositiveMeasure);

  spec.atoms = {{"R", std::nullopt, std::nullopt}, {"A", "R", 1.0}, {"A", "R", 1.0}};
  CHECK(error_of([&] { build_tree(spec); }) == ErrorKind::DuplicateAtom);

  spec.atoms = {{"A", "B", 1.0}, {"B", "A", std::nullopt}};
  CHECK(error_of([&] { build_tree(spec); }) == ErrorKind::CyclicStructure);

  spec.atoms = {{"R", std::nullopt, std::nullopt}, {"A", "Z", 1.0}};
  CHECK(error_of([&] { build_tree(spec); }) == ErrorKind::UnknownAtom);

  TreeSpec<double> explicit_spec;
  explicit_spec.atoms = {{"R", std::nullopt, 3.0}, {"A", "R", 1.0}, {"B", "R", 1.0}};
  CHECK(error_of([&] { build_tree(explicit_spec); }) == ErrorKind::MassMismatch);
  explicit_spec.atoms[0].measure = 2.0;
  CHECK_FALSE(error_of([&] { build_tree(explicit_spec); }));

  const auto f = test::two_leaf(1.0, 1.0);
  CHECK(error_of([&] { f.index_of("nope"); }) == ErrorKind::UnknownAtom);
}

TEST_CASE("single generation random tree has no martingale differences") {
  RandomTreeConfig cfg;
  cfg.seed = 1;
  cfg.max_depth = 1;
  cfg.max_branching = 1;
  const auto f = random_tree(cfg);
  CHECK(f.atom_count() == 1);
  CHECK_FALSE(f.atom(0).splits());
}

TEST_CASE("random trees are reproducible and bounded") {
  RandomTreeConfig cfg;
  cfg.seed = 7;
  cfg.max_depth = 5;
  cfg.max_branching = 3;
  const auto a = random_tree(cfg);
  const auto b = random_tree(cfg);
  CHECK(a.leaf_count() <= 243);
  REQUIRE(a.atom_count() == b.atom_count());
  for (AtomIndex i = 0; i < a.atom_count(); ++i) {
    CHECK(a.atom(i).id == b.atom(i).id);
    CHECK(a.measure(i) == b.measure(i));
  }
  CHECK(a.atoms_below(a.roots()[0]).size() == a.atom_count());
}

TEST_CASE("random trees reach the non-doubling regime") {
  std::uint64_t accepted = 0;
  for (std::uint64_t seed = 3; seed < 40 && !accepted; ++seed) {
    RandomTreeConfig cfg;
    cfg.seed = seed;
    cfg.max_depth = 4;
    cfg.max_branching = 4;
    const auto f = random_tree(cfg);
    for (const auto& a : f.atoms()) {
      for (AtomIndex c : a.children)
        for (AtomIndex d : a.children)
          if (f.measure(c) > 100 * f.measure(d)) accepted = seed;
    }
  }
  MESSAGE("accepted seed " << accepted);
  CHECK(accepted != 0);
}

TEST_CASE("structure invariants on random trees") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomTreeConfig cfg;
    cfg.seed = seed;
    cfg.max_depth = 5;
    cfg.max_branching = 3;
    const auto f = random_tree(cfg);
    const auto ef = to_exact(f);
    for (AtomIndex i = 0; i < f.atom_count(); ++i) {
      const auto& a = f.atom(i);
      if (a.is_leaf()) continue;
      double sum = 0;
      Rational exact(0);
      for (AtomIndex c : a.children) {
        sum += f.measure(c);
        exact += ef.measure(c);
        CHECK(f.contains(i, c));
      }
      CHECK(test::rel_close(sum, f.measure(i), 1e-12));
      CHECK(exact == ef.measure(i));
    }
    // nested or disjoint subtrees
    for (AtomIndex i = 0; i < f.atom_count(); ++i)
      for (AtomIndex j = 0; j < f.atom_count(); ++j) {
        const bool nested = f.contains(i, j) || f.contains(j, i);
        const auto bi = f.atoms_below(i), bj = f.atoms_below(j);
        std::vector<AtomIndex> common;
        std::set_intersection(bi.begin(), bi.end(), bj.begin(), bj.end(), std::back_inserter(common));
        CHECK(nested == !common.empty());
      }
    // round trip keeps the order
    const auto g = build_tree(to_spec(f));
    REQUIRE(g.atom_count() == f.atom_count());
    for (AtomIndex i = 0; i < f.atom_count(); ++i) CHECK(g.atom(i).id == f.atom(i).id);
  }
}

TEST_CASE("forests") {
  TreeSpec<double> spec;
  spec.leaf_measures_only = true;
  spec.atoms = {{"R1", std::nullopt, std::nullopt}, {"A", "R1", 1.0}, {"B", "R1", 2.0}, {"R2", std::nullopt, 5.0}};
  const auto f = build_tree(spec);
  CHECK(f.roots().size() == 2);
  CHECK(f.total_measure() == 8.0);
  CHECK(f.ancestors_of_leaf(1).size() == 2);
}
