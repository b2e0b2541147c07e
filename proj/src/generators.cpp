#include "haarlab/generators.hpp"

#include <cmath>

#include "haarlab/marttools.hpp"

namespace haarlab {

double round_mantissa(double x, int bits) {
  if (bits <= 0 || x == 0 || !std::isfinite(x)) return x;
  int e = 0;
  const double m = std::frexp(x, &e);
  return std::ldexp(std::round(std::ldexp(m, bits)), e - bits);
}

bool has_split(const Filtration& f) {
  for (const auto& a : f.atoms())
    if (a.splits()) return true;
  return false;
}

Filtration small_tree(std::uint64_t seed, std::size_t max_atoms, int max_depth, int max_branching) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    RandomTreeConfig cfg;
    cfg.seed = derive_seed(seed, attempt);
    cfg.max_depth = max_depth;
    cfg.max_branching = max_branching;
    cfg.max_leaves = max_atoms / 2 + 1;
    Filtration f = random_tree(cfg);
    if (f.atom_count() <= max_atoms && has_split(f)) return f;
  }
}

Filtration rounded_tree(const Filtration& f, int bits) {
  TreeSpec<double> spec;
  spec.leaf_measures_only = true;
  for (const auto& a : f.atoms()) {
    NodeSpec<double> ns;
    ns.id = a.id;
    if (a.parent) ns.parent = f.atom(*a.parent).id;
    if (a.is_leaf()) ns.measure = round_mantissa(a.measure, bits);
    spec.atoms.push_back(std::move(ns));
  }
  return build_tree(spec);
}

Weight<double> random_weight(const Filtration& f, Rng& rng, double lo, double hi) {
  LeafFunction<double> w(f.leaf_count());
  for (double& x : w) x = rng.log_uniform(lo, hi);
  return Weight<double>(f, std::move(w));
}

Weight<double> weight_with_a2(const Filtration& f, Rng& rng, double target) {
  LeafFunction<double> g(f.leaf_count());
  for (double& x : g) x = rng.uniform(-1, 1);
  auto make = [&](double t) {
    LeafFunction<double> w(g.size());
    for (std::size_t l = 0; l < g.size(); ++l) w[l] = std::exp(t * g[l]);
    return Weight<double>(f, std::move(w));
  };
  auto a2 = [&](double t) { return a2_characteristic(f, make(t)).value; };
  if (target <= 1) return make(0);
  double lo = 0, hi = 1;
  while (a2(hi) < target && hi < 64) hi *= 2;
  for (int k = 0; k < 60; ++k) {
    const double mid = (lo + hi) / 2;
    (a2(mid) < target ? lo : hi) = mid;
  }
  return make(hi);
}

LeafFunction<double> random_leaf_function(const Filtration& f, Rng& rng, int bits) {
  LeafFunction<double> out(f.leaf_count());
  for (double& x : out) x = round_mantissa(rng.uniform(-1, 1), bits);
  return out;
}

TreeFunction<double> random_tree_function(const Filtration& f, Rng& rng, int bits) {
  TreeFunction<double> out(f.atom_count());
  for (double& x : out) x = round_mantissa(rng.uniform(-1, 1), bits);
  return out;
}

MultiplierSymbol<double> random_symbol(const Filtration& f, Rng& rng, int bits) {
  std::vector<double> c(f.atom_count(), 0.0);
  for (AtomIndex i = 0; i < c.size(); ++i)
    if (f.atom(i).splits()) c[i] = round_mantissa(rng.uniform(-1, 1), bits);
  return MultiplierSymbol<double>(f, std::move(c));
}

LeafFunction<double> random_density(const Filtration& f, Rng& rng, double zero_probability, double lo, double hi,
                                    int bits) {
  LeafFunction<double> d(f.leaf_count());
  bool positive = false;
  for (double& x : d) {
    x = rng.coin(zero_probability) ? 0.0 : round_mantissa(rng.log_uniform(lo, hi), bits);
    positive = positive || x > 0;
  }
  if (!positive) d[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(d.size()) - 1))] = 1.0;
  return d;
}

}  // namespace haarlab
