#include "haarlab/carleson.hpp"

namespace haarlab {

namespace {

template <Scalar S>
struct ChildTerms {
  TreeFunction<S> au, aw;
};

template <Scalar S>
ChildTerms<S> weight_averages(const BasicFiltration<S>& f, const Weight<S>& w) {
  const auto nu = Measure<S>::reference(f);
  return {averages(f, w.u(), nu), averages(f, w.w(), nu)};
}

}  // namespace

template <Scalar S>
TreeFunction<S> gamma_sequence(const BasicFiltration<S>& f, const Weight<S>& w) {
  const auto t = weight_averages(f, w);
  TreeFunction<S> out(f.atom_count(), S(0));
  for (AtomIndex i = 0; i < f.atom_count(); ++i) {
    const auto& a = f.atom(i);
    if (!a.splits()) continue;
    S sum(0);
    for (AtomIndex c : a.children) {
      const S du = t.au[c] - t.au[i];
      sum += du * du * t.aw[c] * f.measure(c);
    }
    out[i] = sum / a.measure;
  }
  return out;
}

template <Scalar S>
TreeFunction<S> tau_sequence(const BasicFiltration<S>& f, const Weight<S>& w) {
  const auto t = weight_averages(f, w);
  TreeFunction<S> out(f.atom_count(), S(0));
  for (AtomIndex i = 0; i < f.atom_count(); ++i) {
    const auto& a = f.atom(i);
    if (!a.splits()) continue;
    S sum(0);
    for (AtomIndex c : a.children) {
      const S du = t.au[c] - t.au[i];
      sum += du * du * t.aw[i] * t.aw[c] * f.measure(c);
    }
    out[i] = sum / a.measure;
  }
  return out;
}

template <Scalar S>
TreeFunction<S> rho_sequence(const BasicFiltration<S>& f, const Weight<S>& w) {
  const auto t = weight_averages(f, w);
  TreeFunction<S> out(f.atom_count(), S(0));
  for (AtomIndex i = 0; i < f.atom_count(); ++i) {
    const auto& a = f.atom(i);
    if (!a.splits()) continue;
    S sum(0);
    for (AtomIndex c : a.children)
      sum += abs_value(S(t.au[c] - t.au[i])) * abs_value(S(t.aw[c] - t.aw[i])) * f.measure(c);
    out[i] = sum / a.measure;
  }
  return out;
}

template <Scalar S>
PackingReport packing_constant(const BasicFiltration<S>& f, const TreeFunction<S>& a, const Measure<S>* normalizer) {
  check_tree_function(f, a);
  std::vector<S> sum(f.atom_count(), S(0));
  for (AtomIndex i = f.atom_count(); i-- > 0;) {
    sum[i] = a[i] * f.measure(i);
    for (AtomIndex c : f.atom(i).children) sum[i] += sum[c];
  }
  PackingReport rep;
  rep.ratios.assign(f.atom_count(), 0.0);
  bool first = true;
  for (AtomIndex i = 0; i < f.atom_count(); ++i) {
    const S n = normalizer ? normalizer->atom[i] : f.measure(i);
    if (n == S(0)) continue;
    rep.ratios[i] = to_double(S(sum[i] / n));
    if (first || rep.ratios[i] > rep.constant) {
      rep.constant = rep.ratios[i];
      rep.witness = i;
      first = false;
    }
  }
  return rep;
}

template <Scalar S>
InequalityCheck carleson_embedding_check(const BasicFiltration<S>& f, const Measure<S>& mu, const TreeFunction<S>& a,
                                         const LeafFunction<S>& fn) {
  const TreeFunction<S> avg = averages(f, fn, mu);
  S lhs(0);
  for (AtomIndex i = 0; i < f.atom_count(); ++i) lhs += avg[i] * avg[i] * a[i] * f.measure(i);
  const PackingReport k = packing_constant(f, a, &mu);
  return make_check(to_double(lhs), 4 * k.constant * to_double(norm_squared(fn, mu)), f.atom(k.witness).id);
}

#define HAARLAB_INSTANTIATE(S)                                                                                     \
  template TreeFunction<S> tau_sequence(const BasicFiltration<S>&, const Weight<S>&);                              \
  template TreeFunction<S> rho_sequence(const BasicFiltration<S>&, const Weight<S>&);                              \
  template TreeFunction<S> gamma_sequence(const BasicFiltration<S>&, const Weight<S>&);                            \
  template PackingReport packing_constant(const BasicFiltration<S>&, const TreeFunction<S>&, const Measure<S>*);   \
  template InequalityCheck carleson_embedding_check(const BasicFiltration<S>&, const Measure<S>&,                  \
                                                    const TreeFunction<S>&, const LeafFunction<S>&);

HAARLAB_INSTANTIATE(double)
HAARLAB_INSTANTIATE(Rational)

}  // namespace haarlab
