#include "haarlab/outerspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace haarlab {

InequalityCheck make_check(double lhs, double rhs, std::string witness, double rel_tol) {
  InequalityCheck c;
  c.lhs = lhs;
  c.rhs = rhs;
  c.slack = rhs - lhs;
  c.witness = std::move(witness);
  c.holds = lhs <= rhs + rel_tol * std::max(std::abs(lhs), std::abs(rhs));
  return c;
}

template <Scalar S>
S outer_measure(const BasicFiltration<S>& f, const std::vector<char>& member, const Measure<S>& mu) {
  if (member.size() != f.atom_count()) throw Error(ErrorKind::InvalidArgument, "membership does not match the tree");
  std::vector<S> cover(f.atom_count(), S(0));
  std::vector<char> touched(f.atom_count(), 0);
  for (AtomIndex i = f.atom_count(); i-- > 0;) {
    const auto& a = f.atom(i);
    S below(0);
    bool any = member[i] != 0;
    for (AtomIndex c : a.children) {
      below += cover[c];
      any = any || touched[c];
    }
    touched[i] = any;
    if (!any) continue;
    cover[i] = member[i] ? mu.atom[i] : std::min(mu.atom[i], below);
  }
  S total(0);
  for (AtomIndex r : f.roots()) total += cover[r];
  return total;
}

template <Scalar S>
S outer_measure(const BasicFiltration<S>& f, const OuterSet& set, const Measure<S>& mu) {
  std::vector<char> member(f.atom_count(), 0);
  for (AtomIndex i : set) {
    if (i >= f.atom_count()) throw Error(ErrorKind::UnknownAtom, "atom index out of range");
    member[i] = 1;
  }
  return outer_measure(f, member, mu);
}

template <Scalar S>
double size(const BasicFiltration<S>& f, const TreeFunction<S>& fn, AtomIndex i, const SizeSpec& s,
            const Measure<S>& mu) {
  check_tree_function(f, fn);
  const AtomIndex end = f.atom(i).subtree_end;
  if (s.kind == SizeKind::Sup) {
    S best(0);
    for (AtomIndex j = i; j < end; ++j)
      if (mu.atom[j] > S(0)) best = std::max(best, abs_value(fn[j]));
    return to_double(best);
  }
  if (s.p < 1) throw Error(ErrorKind::InvalidArgument, "size exponent must be at least 1");
  if (mu.atom[i] == S(0)) throw Error(ErrorKind::ZeroMass, "atom '" + f.atom(i).id + "' has zero mass");
  S sum(0);
  for (AtomIndex j = i; j < end; ++j) sum += power(abs_value(fn[j]), s.p) * mu.atom[j];
  return std::pow(to_double(S(sum / mu.atom[i])), 1.0 / s.p);
}

template <Scalar S>
S superlevel_outer_measure(const BasicFiltration<S>& f, const TreeFunction<S>& fn, const S& lambda, const SizeSpec& s,
                           const Measure<S>& mu) {
  if (s.kind != SizeKind::Sup) throw Error(ErrorKind::UnsupportedSize, "superlevel sets need the sup size");
  check_tree_function(f, fn);
  std::vector<char> member(f.atom_count(), 0);
  for (AtomIndex i = 0; i < f.atom_count(); ++i) member[i] = mu.atom[i] > S(0) && abs_value(fn[i]) > lambda;
  return outer_measure(f, member, mu);
}

template <Scalar S>
S outer_Lp_power(const BasicFiltration<S>& f, const TreeFunction<S>& fn, double p, const Measure<S>& mu,
                 const SizeSpec& s) {
  if (s.kind != SizeKind::Sup) throw Error(ErrorKind::UnsupportedSize, "outer L^p norms need the sup size");
  if (!(p >= 1)) throw Error(ErrorKind::InvalidArgument, "p must be at least 1");
  check_tree_function(f, fn);
  std::vector<S> levels{S(0)};
  for (AtomIndex i = 0; i < f.atom_count(); ++i)
    if (mu.atom[i] > S(0)) levels.push_back(abs_value(fn[i]));
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  S total(0);
  for (std::size_t j = 0; j + 1 < levels.size(); ++j) {
    const S m = superlevel_outer_measure(f, fn, levels[j], s, mu);
    total += m * (power(levels[j + 1], p) - power(levels[j], p));
  }
  return total;
}

template <Scalar S>
SupResult outer_Linf_norm(const BasicFiltration<S>& f, const TreeFunction<S>& fn, const SizeSpec& s,
                          const Measure<S>& mu) {
  SupResult best;
  bool first = true;
  for (AtomIndex i = 0; i < f.atom_count(); ++i) {
    if (s.kind == SizeKind::Power && mu.atom[i] == S(0)) continue;
    const double v = size(f, fn, i, s, mu);
    if (first || v > best.value) {
      best = {v, i};
      first = false;
    }
  }
  return best;
}

template <Scalar S>
InequalityCheck duality_check(const BasicFiltration<S>& f, const TreeFunction<S>& fn, const TreeFunction<S>& gn,
                              const Measure<S>& mu) {
  check_tree_function(f, fn);
  check_tree_function(f, gn);
  S lhs(0);
  for (AtomIndex i = 0; i < f.atom_count(); ++i) lhs += abs_value(S(fn[i] * gn[i])) * mu.atom[i];
  const double l1 = to_double(outer_Lp_power(f, fn, 1.0, mu));
  const SupResult linf = outer_Linf_norm(f, gn, SizeSpec::power(1.0), mu);
  return make_check(to_double(lhs), l1 * linf.value, f.atom(linf.argmax).id);
}

template <Scalar S>
InequalityCheck reciprocal_average_bound(const BasicFiltration<S>& f, const LeafFunction<S>& h, AtomIndex i0) {
  check_leaf_function(f, h);
  const auto nu = Measure<S>::reference(f);
  const auto& root = f.atom(i0);
  LeafFunction<S> inv(f.leaf_count(), S(0));
  S mass(0);
  for (std::size_t l = root.leaf_begin; l < root.leaf_end; ++l) {
    if (!(h[l] > S(0))) throw Error(ErrorKind::InvalidArgument, "h must be positive on the atom");
    inv[l] = S(1) / h[l];
    mass += h[l] * nu.leaf[l];
  }
  const TreeFunction<S> avg_inv = averages(f, inv, nu);
  TreeFunction<S> big_h(f.atom_count(), S(0));
  for (AtomIndex i = i0; i < root.subtree_end; ++i) big_h[i] = S(1) / avg_inv[i];
  return make_check(outer_Lp_norm(f, big_h, 1.0, nu), 2 * to_double(mass), f.atom(i0).id);
}

template <Scalar S>
InequalityCheck bilinear_embedding_check(const BasicFiltration<S>& f, const Weight<S>& w, const LeafFunction<S>& fn,
                                         const LeafFunction<S>& gn) {
  const TreeFunction<S> af = averages(f, fn, w.u_measure());
  const TreeFunction<S> ag = averages(f, gn, w.w_measure());
  TreeFunction<S> prod(f.atom_count());
  for (AtomIndex i = 0; i < f.atom_count(); ++i) prod[i] = af[i] * ag[i];
  const double lhs = outer_Lp_norm(f, prod, 1.0, Measure<S>::reference(f));
  const double rhs = 4 * std::sqrt(to_double(norm_squared(fn, w.u_measure()))) *
                     std::sqrt(to_double(norm_squared(gn, w.w_measure())));
  return make_check(lhs, rhs);
}

template <Scalar S>
InequalityCheck averaging_embedding_check(const BasicFiltration<S>& f, const Measure<S>& mu, const LeafFunction<S>& fn) {
  const TreeFunction<S> a = averages(f, fn, mu);
  const double lhs = outer_Lp_norm(f, a, 2.0, mu);
  const double rhs = 2 * std::sqrt(to_double(norm_squared(fn, mu)));
  return make_check(lhs, rhs);
}

template <Scalar S>
LeafFunction<S> maximal_function(const BasicFiltration<S>& f, const Measure<S>& mu, const LeafFunction<S>& fn) {
  check_leaf_function(f, fn);
  LeafFunction<S> absf(fn.size());
  for (std::size_t l = 0; l < fn.size(); ++l) absf[l] = abs_value(fn[l]);
  const TreeFunction<S> a = averages(f, absf, mu);
  // running maximum down each root-to-leaf path
  TreeFunction<S> best(f.atom_count(), S(0));
  for (AtomIndex i = 0; i < f.atom_count(); ++i) {
    const auto& atom = f.atom(i);
    S v = atom.parent ? best[*atom.parent] : S(0);
    if (mu.atom[i] > S(0)) v = std::max(v, a[i]);
    best[i] = v;
  }
  LeafFunction<S> out(f.leaf_count());
  for (std::size_t l = 0; l < f.leaf_count(); ++l) out[l] = best[f.leaves()[l]];
  return out;
}

#define HAARLAB_INSTANTIATE(S)                                                                                      \
  template S outer_measure(const BasicFiltration<S>&, const std::vector<char>&, const Measure<S>&);                 \
  template S outer_measure(const BasicFiltration<S>&, const OuterSet&, const Measure<S>&);                          \
  template double size(const BasicFiltration<S>&, const TreeFunction<S>&, AtomIndex, const SizeSpec&,               \
                       const Measure<S>&);                                                                          \
  template S superlevel_outer_measure(const BasicFiltration<S>&, const TreeFunction<S>&, const S&, const SizeSpec&, \
                                      const Measure<S>&);                                                           \
  template S outer_Lp_power(const BasicFiltration<S>&, const TreeFunction<S>&, double, const Measure<S>&,           \
                            const SizeSpec&);                                                                       \
  template SupResult outer_Linf_norm(const BasicFiltration<S>&, const TreeFunction<S>&, const SizeSpec&,            \
                                     const Measure<S>&);                                                            \
  template InequalityCheck duality_check(const BasicFiltration<S>&, const TreeFunction<S>&, const TreeFunction<S>&, \
                                         const Measure<S>&);                                                        \
  template InequalityCheck reciprocal_average_bound(const BasicFiltration<S>&, const LeafFunction<S>&, AtomIndex);  \
  template InequalityCheck bilinear_embedding_check(const BasicFiltration<S>&, const Weight<S>&,                    \
                                                    const LeafFunction<S>&, const LeafFunction<S>&);                \
  template InequalityCheck averaging_embedding_check(const BasicFiltration<S>&, const Measure<S>&,                  \
                                                     const LeafFunction<S>&);                                       \
  template LeafFunction<S> maximal_function(const BasicFiltration<S>&, const Measure<S>&, const LeafFunction<S>&);

HAARLAB_INSTANTIATE(double)
HAARLAB_INSTANTIATE(Rational)

}  // namespace haarlab
