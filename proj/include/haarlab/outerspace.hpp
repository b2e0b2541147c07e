#pragma once

#include <string>
#include <vector>

#include "haarlab/marttools.hpp"

namespace haarlab {

// A subset of the atom set, given by atom indices.
using OuterSet = std::vector<AtomIndex>;

enum class SizeKind { Power, Sup };

struct SizeSpec {
  SizeKind kind = SizeKind::Sup;
  double p = 1.0;

  static SizeSpec sup() { return {SizeKind::Sup, 1.0}; }
  static SizeSpec power(double p) { return {SizeKind::Power, p}; }
};

// Result of an inequality check lhs <= rhs.
struct InequalityCheck {
  double lhs = 0;
  double rhs = 0;
  double slack = 0;  // rhs - lhs
  std::string witness;
  bool holds = true;
};

InequalityCheck make_check(double lhs, double rhs, std::string witness = {}, double rel_tol = 1e-9);

// Cheapest cover of the set by subtrees D(I) with cost mu(I).
template <Scalar S>
S outer_measure(const BasicFiltration<S>& f, const OuterSet& set, const Measure<S>& mu);

// Same, with membership given per atom.
template <Scalar S>
S outer_measure(const BasicFiltration<S>& f, const std::vector<char>& member, const Measure<S>& mu);

// S^p_mu F(D(I)) or S^inf_mu F(D(I)). The sup kind ignores atoms of zero mass.
template <Scalar S>
double size(const BasicFiltration<S>& f, const TreeFunction<S>& fn, AtomIndex i, const SizeSpec& s,
            const Measure<S>& mu);

// mu* of the superlevel set of the sup size: the atoms of positive mass with |F(I)| > lambda.
template <Scalar S>
S superlevel_outer_measure(const BasicFiltration<S>& f, const TreeFunction<S>& fn, const S& lambda, const SizeSpec& s,
                           const Measure<S>& mu);

// p * int_0^inf lambda^{p-1} mu*(SF > lambda) d lambda, integrated exactly between
// the breakpoints |F(I)|. Exact for rationals and integer p.
template <Scalar S>
S outer_Lp_power(const BasicFiltration<S>& f, const TreeFunction<S>& fn, double p, const Measure<S>& mu,
                 const SizeSpec& s = SizeSpec::sup());

template <Scalar S>
double outer_Lp_norm(const BasicFiltration<S>& f, const TreeFunction<S>& fn, double p, const Measure<S>& mu,
                     const SizeSpec& s = SizeSpec::sup()) {
  return std::pow(to_double(outer_Lp_power(f, fn, p, mu, s)), 1.0 / p);
}

struct SupResult {
  double value = 0;
  AtomIndex argmax = 0;
};

// sup over atoms of SF(D(I)); power kinds skip atoms of zero mass.
template <Scalar S>
SupResult outer_Linf_norm(const BasicFiltration<S>& f, const TreeFunction<S>& fn, const SizeSpec& s,
                          const Measure<S>& mu);

// sum |F G| mu(I) <= ||F||_{L^1(S^inf)} ||G||_{L^inf(S^1_mu)}
template <Scalar S>
InequalityCheck duality_check(const BasicFiltration<S>& f, const TreeFunction<S>& fn, const TreeFunction<S>& gn,
                              const Measure<S>& mu);

// H(I) = 1 / <1/h>_I on D(I0): ||H||_{L^1(S^inf)} <= 2 ||h 1_{I0}||_{L^1}
template <Scalar S>
InequalityCheck reciprocal_average_bound(const BasicFiltration<S>& f, const LeafFunction<S>& h, AtomIndex i0);

// ||<f>_{I,u} <g>_{I,w}||_{L^1(S^inf)} <= 4 ||f||_{L^2(u)} ||g||_{L^2(w)}
template <Scalar S>
InequalityCheck bilinear_embedding_check(const BasicFiltration<S>& f, const Weight<S>& w, const LeafFunction<S>& fn,
                                         const LeafFunction<S>& gn);

// ||<f>_{I,mu}||_{L^2(mu*, S^inf)} <= 2 ||f||_{L^2(mu)}, averages over null atoms set to 0.
template <Scalar S>
InequalityCheck averaging_embedding_check(const BasicFiltration<S>& f, const Measure<S>& mu, const LeafFunction<S>& fn);

// Dyadic maximal function sup_{I containing x} <|f|>_{I,mu}.
template <Scalar S>
LeafFunction<S> maximal_function(const BasicFiltration<S>& f, const Measure<S>& mu, const LeafFunction<S>& fn);

}  // namespace haarlab
