#include "haarlab/functions.hpp"

#include <cmath>

namespace haarlab {

namespace {

template <Scalar S>
bool finite(const S& x) {
  if constexpr (is_exact_v<S>) {
    return true;
  } else {
    return std::isfinite(x);
  }
}

}  // namespace

template <Scalar S>
void check_leaf_function(const BasicFiltration<S>& f, const LeafFunction<S>& g) {
  if (g.size() != f.leaf_count())
    throw Error(ErrorKind::InvalidArgument, "leaf function has " + std::to_string(g.size()) + " values, tree has " +
                                                std::to_string(f.leaf_count()) + " leaves");
  for (const S& x : g) {
    if (!finite(x)) throw Error(ErrorKind::InvalidArgument, "leaf function has a non-finite value");
  }
}

template <Scalar S>
void check_tree_function(const BasicFiltration<S>& f, const TreeFunction<S>& g) {
  if (g.size() != f.atom_count())
    throw Error(ErrorKind::InvalidArgument, "tree function has " + std::to_string(g.size()) + " values, tree has " +
                                                std::to_string(f.atom_count()) + " atoms");
}

template <Scalar S>
LeafFunction<S> indicator(const BasicFiltration<S>& f, AtomIndex i) {
  LeafFunction<S> g(f.leaf_count(), S(0));
  const auto& a = f.atom(i);
  for (std::size_t l = a.leaf_begin; l < a.leaf_end; ++l) g[l] = S(1);
  return g;
}

template <Scalar S>
Measure<S> Measure<S>::reference(const BasicFiltration<S>& f) {
  Measure m;
  m.leaf.reserve(f.leaf_count());
  for (AtomIndex l : f.leaves()) m.leaf.push_back(f.measure(l));
  m.atom.reserve(f.atom_count());
  for (const auto& a : f.atoms()) m.atom.push_back(a.measure);
  return m;
}

template <Scalar S>
Measure<S> Measure<S>::with_density(const BasicFiltration<S>& f, const LeafFunction<S>& density) {
  check_leaf_function(f, density);
  Measure m;
  m.leaf.resize(f.leaf_count());
  for (std::size_t l = 0; l < f.leaf_count(); ++l) {
    if (density[l] < S(0)) throw Error(ErrorKind::InvalidArgument, "measure density must be non-negative");
    m.leaf[l] = density[l] * f.measure(f.leaves()[l]);
  }
  m.atom.assign(f.atom_count(), S(0));
  for (AtomIndex i = f.atom_count(); i-- > 0;) {
    const auto& a = f.atom(i);
    if (a.is_leaf()) {
      m.atom[i] = m.leaf[a.leaf_begin];
    } else {
      S sum(0);
      for (AtomIndex c : a.children) sum += m.atom[c];
      m.atom[i] = sum;
    }
  }
  return m;
}

template <Scalar S>
S Measure<S>::total(const BasicFiltration<S>& f) const {
  S t(0);
  for (AtomIndex r : f.roots()) t += atom[r];
  return t;
}

template <Scalar S>
Weight<S>::Weight(const BasicFiltration<S>& f, LeafFunction<S> w) : w_(std::move(w)) {
  check_leaf_function(f, w_);
  u_.reserve(w_.size());
  for (const S& x : w_) {
    if (!(x > S(0))) throw Error(ErrorKind::InvalidArgument, "weight values must be strictly positive");
    u_.push_back(S(1) / x);
  }
  wm_ = Measure<S>::with_density(f, w_);
  um_ = Measure<S>::with_density(f, u_);
}

template <Scalar S>
MultiplierSymbol<S>::MultiplierSymbol(const BasicFiltration<S>& f, std::vector<S> coefficients)
    : c_(std::move(coefficients)) {
  if (c_.size() != f.atom_count()) throw Error(ErrorKind::InvalidArgument, "symbol needs one coefficient per atom");
  for (const S& x : c_) {
    if (!finite(x) || abs_value(x) > S(1))
      throw Error(ErrorKind::InvalidArgument, "multiplier coefficients must satisfy |sigma| <= 1");
  }
}

template <Scalar S>
MultiplierSymbol<S> MultiplierSymbol<S>::from_map(const BasicFiltration<S>& f, const std::map<std::string, S>& values) {
  std::vector<S> c(f.atom_count(), S(0));
  for (const auto& [id, v] : values) c[f.index_of(id)] = v;
  return MultiplierSymbol(f, std::move(c));
}

template <Scalar S>
MultiplierSymbol<S> MultiplierSymbol<S>::restricted(const BasicFiltration<S>& f, AtomIndex i0) const {
  std::vector<S> c(c_.size(), S(0));
  for (AtomIndex j = i0; j < f.atom(i0).subtree_end; ++j) c[j] = c_[j];
  return MultiplierSymbol(f, std::move(c));
}

std::vector<Rational> to_exact(const std::vector<double>& v) {
  return std::vector<Rational>(v.begin(), v.end());
}

std::vector<double> to_float(const std::vector<Rational>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(to_double(x));
  return out;
}

#define HAARLAB_INSTANTIATE(S)                                                          \
  template void check_leaf_function(const BasicFiltration<S>&, const LeafFunction<S>&); \
  template void check_tree_function(const BasicFiltration<S>&, const TreeFunction<S>&); \
  template LeafFunction<S> indicator(const BasicFiltration<S>&, AtomIndex);             \
  template struct Measure<S>;                                                           \
  template class Weight<S>;                                                             \
  template class MultiplierSymbol<S>;

HAARLAB_INSTANTIATE(double)
HAARLAB_INSTANTIATE(Rational)

}  // namespace haarlab
