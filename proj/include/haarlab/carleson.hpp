#pragma once

#include <string>
#include <vector>

#include "haarlab/outerspace.hpp"

namespace haarlab {

// tau_I = sum_{ch} |<u>_{I'} - <u>_I|^2 <w>_I <w>_{I'} |I'| / |I|
template <Scalar S>
TreeFunction<S> tau_sequence(const BasicFiltration<S>& f, const Weight<S>& w);

// rho_I = sum_{ch} |<u>_{I'} - <u>_I| |<w>_{I'} - <w>_I| |I'| / |I|
template <Scalar S>
TreeFunction<S> rho_sequence(const BasicFiltration<S>& f, const Weight<S>& w);

// gamma_I = |I|^{-1} int_I |Delta_I u|^2 w
template <Scalar S>
TreeFunction<S> gamma_sequence(const BasicFiltration<S>& f, const Weight<S>& w);

struct PackingReport {
  double constant = 0;
  AtomIndex witness = 0;
  std::vector<double> ratios;  // per atom; 0 where the normalizer vanishes
};

// max over I0 of sum_{D(I0)} a_I |I| / N(I0), with N = |I0| or N = mu(I0).
template <Scalar S>
PackingReport packing_constant(const BasicFiltration<S>& f, const TreeFunction<S>& a,
                               const Measure<S>* normalizer = nullptr);

// sum_I <f>_{I,mu}^2 a_I |I| <= 4 K ||f||^2_{L^2(mu)}, K the packing constant of a against mu.
template <Scalar S>
InequalityCheck carleson_embedding_check(const BasicFiltration<S>& f, const Measure<S>& mu, const TreeFunction<S>& a,
                                         const LeafFunction<S>& fn);

}  // namespace haarlab
