#pragma once

#include <doctest.h>

#include "haarlab/counterexample.hpp"
#include "haarlab/filtration.hpp"
#include "haarlab/generators.hpp"

namespace test {

using namespace haarlab;

template <Scalar S>
BasicFiltration<S> two_leaf(const S& a, const S& b) {
  TreeSpec<S> spec;
  spec.leaf_measures_only = true;
  spec.atoms = {{"R", std::nullopt, std::nullopt}, {"A", "R", a}, {"B", "R", b}};
  return build_tree(spec);
}

// Seven-atom tree and weight with eps = 1/100.
inline CounterexampleInstance seven(const char* eps = "1/100") { return build_instance(parse_rational(eps)); }

inline std::vector<double> leaf_mass(const Filtration& f) {
  std::vector<double> m;
  for (AtomIndex l : f.leaves()) m.push_back(f.measure(l));
  return m;
}

inline bool rel_close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace test

namespace test {

// Kind of the haarlab::Error raised by fn, or nullopt when it returns normally.
template <class Fn>
std::optional<haarlab::ErrorKind> error_of(Fn fn) {
  try {
    fn();
  } catch (const haarlab::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace test
