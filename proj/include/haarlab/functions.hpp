#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "haarlab/filtration.hpp"

namespace haarlab {

// One value per leaf, in leaf order.
template <Scalar S>
using LeafFunction = std::vector<S>;

// One value per atom, in depth-first atom order.
template <Scalar S>
using TreeFunction = std::vector<S>;

template <Scalar S>
void check_leaf_function(const BasicFiltration<S>& f, const LeafFunction<S>& g);

template <Scalar S>
void check_tree_function(const BasicFiltration<S>& f, const TreeFunction<S>& g);

// Indicator of the leaves below atom i.
template <Scalar S>
LeafFunction<S> indicator(const BasicFiltration<S>& f, AtomIndex i);

template <Scalar S>
LeafFunction<S> constant(const BasicFiltration<S>& f, const S& c) {
  return LeafFunction<S>(f.leaf_count(), c);
}

// A measure absolutely continuous with respect to the reference measure,
// stored as leaf masses and the accumulated atom masses. Zero mass is allowed.
template <Scalar S>
struct Measure {
  std::vector<S> leaf;  // mu(L) = density(L) |L|
  std::vector<S> atom;  // mu(I), summed bottom-up

  static Measure reference(const BasicFiltration<S>& f);
  static Measure with_density(const BasicFiltration<S>& f, const LeafFunction<S>& density);

  S total(const BasicFiltration<S>& f) const;
};

// Strictly positive weight w with its reciprocal u = 1/w.
template <Scalar S>
class Weight {
 public:
  Weight() = default;
  Weight(const BasicFiltration<S>& f, LeafFunction<S> w);

  static Weight unit(const BasicFiltration<S>& f) { return Weight(f, constant(f, S(1))); }

  const LeafFunction<S>& w() const { return w_; }
  const LeafFunction<S>& u() const { return u_; }
  const Measure<S>& w_measure() const { return wm_; }
  const Measure<S>& u_measure() const { return um_; }
  Weight swapped(const BasicFiltration<S>& f) const { return Weight(f, u_); }

 private:
  LeafFunction<S> w_, u_;
  Measure<S> wm_, um_;
};

// Coefficients sigma_I with |sigma_I| <= 1, one per atom (zero if unlisted).
template <Scalar S>
class MultiplierSymbol {
 public:
  MultiplierSymbol() = default;
  MultiplierSymbol(const BasicFiltration<S>& f, std::vector<S> coefficients);

  static MultiplierSymbol zero(const BasicFiltration<S>& f) {
    return MultiplierSymbol(f, std::vector<S>(f.atom_count(), S(0)));
  }
  static MultiplierSymbol constant(const BasicFiltration<S>& f, const S& c) {
    return MultiplierSymbol(f, std::vector<S>(f.atom_count(), c));
  }
  static MultiplierSymbol from_map(const BasicFiltration<S>& f, const std::map<std::string, S>& values);

  const std::vector<S>& coefficients() const { return c_; }
  const S& operator[](AtomIndex i) const { return c_[i]; }
  std::size_t size() const { return c_.size(); }

  // Zero outside D(i0).
  MultiplierSymbol restricted(const BasicFiltration<S>& f, AtomIndex i0) const;

 private:
  std::vector<S> c_;
};

// Conversions between backends for leaf/atom vectors.
std::vector<Rational> to_exact(const std::vector<double>& v);
std::vector<double> to_float(const std::vector<Rational>& v);

}  // namespace haarlab
