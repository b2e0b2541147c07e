#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "haarlab/error.hpp"
#include "haarlab/scalar.hpp"

namespace haarlab {

using AtomIndex = std::size_t;

// A node of the atom forest. An atom that persists over several generations
// is a chain of single-child nodes, one per generation.
template <Scalar S>
struct Atom {
  std::string id;
  int generation = 0;
  S measure{};
  std::optional<AtomIndex> parent;
  std::vector<AtomIndex> children;
  AtomIndex subtree_end = 0;  // the subtree of atom i is [i, subtree_end) in depth-first order
  std::size_t leaf_begin = 0;  // leaves below the atom are [leaf_begin, leaf_end) in leaf order
  std::size_t leaf_end = 0;

  bool is_leaf() const { return children.empty(); }
  // Atoms with fewer than two children carry a zero martingale difference.
  bool splits() const { return children.size() >= 2; }
};

template <Scalar S>
struct NodeSpec {
  std::string id;
  std::optional<std::string> parent;
  std::optional<S> measure;
};

// Parent-link description of a forest. With `leaf_measures_only` the internal
// measures must be omitted; otherwise omitted internal measures are filled in
// and explicit ones are checked against the sum of their children.
template <Scalar S>
struct TreeSpec {
  std::vector<NodeSpec<S>> atoms;
  bool leaf_measures_only = false;
};

// Finite atomic filtration: an immutable rooted forest with positive atom
// measures. Atoms are stored in depth-first order, so the subtree D(I) of an
// atom is a contiguous index range and the leaves below it are a contiguous
// leaf range.
template <Scalar S>
class BasicFiltration {
 public:
  using scalar_type = S;

  BasicFiltration() = default;

  const std::vector<Atom<S>>& atoms() const { return atoms_; }
  const Atom<S>& atom(AtomIndex i) const { return atoms_.at(i); }
  const S& measure(AtomIndex i) const { return atoms_[i].measure; }
  std::size_t atom_count() const { return atoms_.size(); }
  std::size_t leaf_count() const { return leaves_.size(); }
  const std::vector<AtomIndex>& roots() const { return roots_; }
  // Atom index of each leaf, in leaf order.
  const std::vector<AtomIndex>& leaves() const { return leaves_; }
  // Number of generations.
  int depth() const { return depth_; }

  std::optional<AtomIndex> find(std::string_view id) const;
  AtomIndex index_of(std::string_view id) const;  // throws UnknownAtom

  // D(I): the atom and all its descendants in depth-first order.
  std::vector<AtomIndex> atoms_below(AtomIndex i) const;
  std::vector<AtomIndex> atoms_below(std::string_view id) const { return atoms_below(index_of(id)); }

  bool contains(AtomIndex ancestor, AtomIndex descendant) const {
    return ancestor <= descendant && descendant < atoms_[ancestor].subtree_end;
  }
  bool contains_leaf(AtomIndex i, std::size_t leaf) const {
    return atoms_[i].leaf_begin <= leaf && leaf < atoms_[i].leaf_end;
  }
  // The chain from a leaf up to its root, leaf first.
  std::vector<AtomIndex> ancestors_of_leaf(std::size_t leaf) const;
  // The child of `i` whose subtree contains `leaf`.
  AtomIndex child_containing_leaf(AtomIndex i, std::size_t leaf) const;

  S total_measure() const;

  static BasicFiltration from_spec(const TreeSpec<S>& spec);

 private:
  std::vector<Atom<S>> atoms_;
  std::vector<AtomIndex> roots_;
  std::vector<AtomIndex> leaves_;
  std::unordered_map<std::string, AtomIndex> index_;
  int depth_ = 0;
};

using Filtration = BasicFiltration<double>;
using ExactFiltration = BasicFiltration<Rational>;

template <Scalar S>
BasicFiltration<S> build_tree(const TreeSpec<S>& spec) {
  return BasicFiltration<S>::from_spec(spec);
}

// Spec describing an existing filtration (all measures explicit), in
// depth-first order. Rebuilding from it reproduces the filtration.
template <Scalar S>
TreeSpec<S> to_spec(const BasicFiltration<S>& f);

ExactFiltration to_exact(const Filtration& f);  // exact conversion of binary doubles
Filtration to_float(const ExactFiltration& f);

// Log-uniform leaf masses on [lo, hi].
struct MeasureLaw {
  double lo = 1e-3;
  double hi = 1e3;
};

struct RandomTreeConfig {
  std::uint64_t seed = 1;
  int max_depth = 4;       // number of generations, >= 1
  int max_branching = 3;   // >= 1; single children model persisting atoms
  MeasureLaw law;
  double stop_probability = 0.2;  // chance that a non-root atom above the last generation is a leaf
  std::size_t max_leaves = 0;     // 0 means unbounded
};

Filtration random_tree(const RandomTreeConfig& config);

}  // namespace haarlab
