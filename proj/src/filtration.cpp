#include "haarlab/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "haarlab/random.hpp"

namespace haarlab {

template <Scalar S>
std::optional<AtomIndex> BasicFiltration<S>::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

template <Scalar S>
AtomIndex BasicFiltration<S>::index_of(std::string_view id) const {
  auto found = find(id);
  if (!found) throw Error(ErrorKind::UnknownAtom, "no atom with id '" + std::string(id) + "'");
  return *found;
}

template <Scalar S>
std::vector<AtomIndex> BasicFiltration<S>::atoms_below(AtomIndex i) const {
  if (i >= atoms_.size()) throw Error(ErrorKind::UnknownAtom, "atom index out of range");
  std::vector<AtomIndex> out;
  out.reserve(atoms_[i].subtree_end - i);
  for (AtomIndex j = i; j < atoms_[i].subtree_end; ++j) out.push_back(j);
  return out;
}

template <Scalar S>
std::vector<AtomIndex> BasicFiltration<S>::ancestors_of_leaf(std::size_t leaf) const {
  std::vector<AtomIndex> chain;
  std::optional<AtomIndex> cur = leaves_.at(leaf);
  while (cur) {
    chain.push_back(*cur);
    cur = atoms_[*cur].parent;
  }
  return chain;
}

template <Scalar S>
AtomIndex BasicFiltration<S>::child_containing_leaf(AtomIndex i, std::size_t leaf) const {
  for (AtomIndex c : atoms_[i].children) {
    if (contains_leaf(c, leaf)) return c;
  }
  throw Error(ErrorKind::InvalidArgument, "leaf is not below atom '" + atoms_[i].id + "'");
}

template <Scalar S>
S BasicFiltration<S>::total_measure() const {
  S total(0);
  for (AtomIndex r : roots_) total += atoms_[r].measure;
  return total;
}

template <Scalar S>
BasicFiltration<S> BasicFiltration<S>::from_spec(const TreeSpec<S>& spec) {
  const std::size_t n = spec.atoms.size();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "tree has no atoms");

  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t k = 0; k < n; ++k) {
    if (!pos.emplace(spec.atoms[k].id, k).second)
      throw Error(ErrorKind::DuplicateAtom, "atom '" + spec.atoms[k].id + "' listed twice");
  }

  std::vector<std::vector<std::size_t>> kids(n);
  std::vector<std::size_t> roots;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& parent = spec.atoms[k].parent;
    if (!parent) {
      roots.push_back(k);
      continue;
    }
    auto it = pos.find(*parent);
    if (it == pos.end())
      throw Error(ErrorKind::UnknownAtom,
                  "atom '" + spec.atoms[k].id + "' has unknown parent '" + *parent + "'");
    if (it->second == k) throw Error(ErrorKind::CyclicStructure, "atom '" + spec.atoms[k].id + "' is its own parent");
    kids[it->second].push_back(k);
  }
  if (roots.empty()) throw Error(ErrorKind::CyclicStructure, "no root atom: parent links form a cycle");

  // Depth-first layout; anything not reached from a root sits on a cycle.
  BasicFiltration f;
  f.atoms_.reserve(n);
  std::vector<std::size_t> spec_of;  // spec position of each stored atom
  spec_of.reserve(n);
  std::vector<char> seen(n, 0);

  struct Frame {
    std::size_t spec_pos;
    std::optional<AtomIndex> parent;
    int generation;
  };
  for (std::size_t r : roots) {
    std::vector<Frame> stack{{r, std::nullopt, 0}};
    while (!stack.empty()) {
      Frame fr = stack.back();
      stack.pop_back();
      if (seen[fr.spec_pos]) throw Error(ErrorKind::CyclicStructure, "atom reached twice");
      seen[fr.spec_pos] = 1;
      const AtomIndex idx = f.atoms_.size();
      Atom<S> atom;
      atom.id = spec.atoms[fr.spec_pos].id;
      atom.generation = fr.generation;
      atom.parent = fr.parent;
      f.atoms_.push_back(std::move(atom));
      spec_of.push_back(fr.spec_pos);
      if (fr.parent) f.atoms_[*fr.parent].children.push_back(idx);
      const auto& ch = kids[fr.spec_pos];
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back({*it, idx, fr.generation + 1});
    }
  }
  if (f.atoms_.size() != n) throw Error(ErrorKind::CyclicStructure, "some atoms are not reachable from a root");

  // Subtree ranges, leaf ranges and measures, bottom-up.
  for (AtomIndex i = 0; i < n; ++i) {
    if (f.atoms_[i].is_leaf()) {
      f.atoms_[i].leaf_begin = f.leaves_.size();
      f.leaves_.push_back(i);
      f.atoms_[i].leaf_end = f.leaves_.size();
    }
  }
  for (AtomIndex i = n; i-- > 0;) {
    Atom<S>& a = f.atoms_[i];
    const NodeSpec<S>& ns = spec.atoms[spec_of[i]];
    if (a.is_leaf()) {
      a.subtree_end = i + 1;
      if (!ns.measure) throw Error(ErrorKind::InvalidArgument, "leaf '" + a.id + "' has no measure");
      if (!(*ns.measure > S(0))) throw Error(ErrorKind::NonPositiveMeasure, "atom '" + a.id + "' has measure <= 0");
      if constexpr (!is_exact_v<S>) {
        if (!std::isfinite(*ns.measure)) throw Error(ErrorKind::NonPositiveMeasure, "atom '" + a.id + "' has non-finite measure");
      }
      a.measure = *ns.measure;
      continue;
    }
    a.subtree_end = f.atoms_[a.children.back()].subtree_end;
    a.leaf_begin = f.atoms_[a.children.front()].leaf_begin;
    a.leaf_end = f.atoms_[a.children.back()].leaf_end;
    S sum(0);
    for (AtomIndex c : a.children) sum += f.atoms_[c].measure;
    if (ns.measure) {
      if (spec.leaf_measures_only)
        throw Error(ErrorKind::ParseError, "internal atom '" + a.id + "' carries a measure but only leaf measures are allowed");
      if (!(*ns.measure > S(0))) throw Error(ErrorKind::NonPositiveMeasure, "atom '" + a.id + "' has measure <= 0");
      if (!nearly_equal(*ns.measure, sum, 1e-9))
        throw Error(ErrorKind::MassMismatch, "atom '" + a.id + "' measure differs from the sum of its children");
    }
    a.measure = sum;
  }

  for (AtomIndex i = 0; i < n; ++i) {
    if (!f.atoms_[i].parent) f.roots_.push_back(i);
    f.depth_ = std::max(f.depth_, f.atoms_[i].generation + 1);
    f.index_.emplace(f.atoms_[i].id, i);
  }
  return f;
}

template <Scalar S>
TreeSpec<S> to_spec(const BasicFiltration<S>& f) {
  TreeSpec<S> spec;
  spec.atoms.reserve(f.atom_count());
  for (const auto& a : f.atoms()) {
    NodeSpec<S> ns;
    ns.id = a.id;
    if (a.parent) ns.parent = f.atom(*a.parent).id;
    ns.measure = a.measure;
    spec.atoms.push_back(std::move(ns));
  }
  return spec;
}

namespace {

template <Scalar To, Scalar From, class Convert>
BasicFiltration<To> convert(const BasicFiltration<From>& f, Convert conv) {
  TreeSpec<To> spec;
  spec.leaf_measures_only = true;
  for (const auto& a : f.atoms()) {
    NodeSpec<To> ns;
    ns.id = a.id;
    if (a.parent) ns.parent = f.atom(*a.parent).id;
    if (a.is_leaf()) ns.measure = conv(a.measure);
    spec.atoms.push_back(std::move(ns));
  }
  return BasicFiltration<To>::from_spec(spec);
}

}  // namespace

ExactFiltration to_exact(const Filtration& f) {
  return convert<Rational>(f, [](double x) { return Rational(x); });
}

Filtration to_float(const ExactFiltration& f) {
  return convert<double>(f, [](const Rational& x) { return to_double(x); });
}

Filtration random_tree(const RandomTreeConfig& config) {
  if (config.max_depth < 1) throw Error(ErrorKind::InvalidArgument, "max_depth must be >= 1");
  if (config.max_branching < 1) throw Error(ErrorKind::InvalidArgument, "max_branching must be >= 1");
  if (!(config.law.lo > 0) || !(config.law.hi >= config.law.lo))
    throw Error(ErrorKind::InvalidArgument, "measure law needs 0 < lo <= hi");
  if (config.stop_probability < 0 || config.stop_probability > 1)
    throw Error(ErrorKind::InvalidArgument, "stop_probability must lie in [0, 1]");

  Rng rng(config.seed);
  struct Node {
    std::optional<std::size_t> parent;
    int generation;
    bool leaf = true;
  };
  std::vector<Node> nodes{{std::nullopt, 0}};
  std::size_t leaves = 1;
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t k = queue.front();
    queue.pop_front();
    const int g = nodes[k].generation;
    if (g + 1 >= config.max_depth) continue;
    if (g > 0 && rng.uniform() < config.stop_probability) continue;
    int branches = static_cast<int>(rng.uniform_int(1, config.max_branching));
    if (config.max_leaves > 0) {
      const std::size_t room = config.max_leaves - std::min(config.max_leaves, leaves);
      branches = std::min<int>(branches, static_cast<int>(room) + 1);
    }
    nodes[k].leaf = false;
    leaves += static_cast<std::size_t>(branches) - 1;
    for (int b = 0; b < branches; ++b) {
      nodes.push_back({k, g + 1});
      queue.push_back(nodes.size() - 1);
    }
  }

  const double log_lo = std::log(config.law.lo);
  const double log_hi = std::log(config.law.hi);
  TreeSpec<double> spec;
  spec.leaf_measures_only = true;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    NodeSpec<double> ns;
    ns.id = "a" + std::to_string(k);
    if (nodes[k].parent) ns.parent = "a" + std::to_string(*nodes[k].parent);
    if (nodes[k].leaf) ns.measure = std::exp(log_lo + (log_hi - log_lo) * rng.uniform());
    spec.atoms.push_back(std::move(ns));
  }
  return Filtration::from_spec(spec);
}

template class BasicFiltration<double>;
template class BasicFiltration<Rational>;
template TreeSpec<double> to_spec(const BasicFiltration<double>&);
template TreeSpec<Rational> to_spec(const BasicFiltration<Rational>&);

}  // namespace haarlab
