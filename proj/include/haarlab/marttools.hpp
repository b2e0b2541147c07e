#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "haarlab/functions.hpp"
#include "haarlab/linalg.hpp"

namespace haarlab {

// mu(I)^{-1} sum_{L in I} g(L) mu(L). Throws ZeroMass when mu(I) = 0.
template <Scalar S>
S average(const BasicFiltration<S>& f, const LeafFunction<S>& g, AtomIndex i, const Measure<S>& mu);

template <Scalar S>
S average(const BasicFiltration<S>& f, const LeafFunction<S>& g, AtomIndex i) {
  return average(f, g, i, Measure<S>::reference(f));
}

// All atom averages at once; atoms of zero mass get 0.
template <Scalar S>
TreeFunction<S> averages(const BasicFiltration<S>& f, const LeafFunction<S>& g, const Measure<S>& mu);

// sum_{I' in ch(I)} E_{I'}^mu g - E_I^mu g.
template <Scalar S>
LeafFunction<S> martingale_difference(const BasicFiltration<S>& f, const LeafFunction<S>& g, AtomIndex i,
                                      const Measure<S>& mu);

template <Scalar S>
LeafFunction<S> martingale_difference(const BasicFiltration<S>& f, const LeafFunction<S>& g, AtomIndex i) {
  return martingale_difference(f, g, i, Measure<S>::reference(f));
}

// T_sigma g = sum sigma_I Delta_I g, over D(restrict_to) when given.
template <Scalar S>
LeafFunction<S> apply_multiplier(const BasicFiltration<S>& f, const MultiplierSymbol<S>& sigma,
                                 const LeafFunction<S>& g, std::optional<AtomIndex> restrict_to = std::nullopt);

template <Scalar S>
struct A2Result {
  S value;
  AtomIndex argmax = 0;
};

// max over atoms of <w>_I <w^{-1}>_I; ties go to the first atom in depth-first order.
template <Scalar S>
A2Result<S> a2_characteristic(const BasicFiltration<S>& f, const Weight<S>& w);

// sum_L g(L)^2 mu(L)
template <Scalar S>
S norm_squared(const LeafFunction<S>& g, const Measure<S>& mu);

template <Scalar S>
double weighted_norm(const LeafFunction<S>& g, const Weight<S>& w) {
  return std::sqrt(to_double(norm_squared(g, w.w_measure())));
}

// T_sigma acting on L^2(w).
WeightedOperator multiplier_operator(const Filtration& f, const MultiplierSymbol<double>& sigma,
                                     const Weight<double>& w);

// E_I acting on L^2(w).
WeightedOperator average_operator(const Filtration& f, AtomIndex i, const Weight<double>& w);

// Atoms that persist into generation g: atoms of generation g and leaves
// of earlier generations.
std::vector<AtomIndex> atoms_alive_at(const Filtration& f, int generation);

// Norm of P_{m,n} = sum_{k=m}^{n} Delta_k on L^2(w), with
// Delta_k = sum over splitting atoms of generation k-1 of Delta_I.
// Valid range 0 <= m <= n <= depth.
double partial_sum_norm(const Filtration& f, const Weight<double>& w, int m, int n);

struct PartialSumMax {
  double value = 0;
  int m = 0;
  int n = 0;
};

PartialSumMax max_partial_sum_norm(const Filtration& f, const Weight<double>& w);

template <Scalar S>
struct ReductionAtom {
  AtomIndex atom = 0;
  LeafFunction<S> h;        // Delta_I u
  LeafFunction<S> hw;       // h - gamma 1_I
  S gamma{};                // from the children sum of (<u>_{I'} - <u>_I) <w>_{I'} |I'|
  S gamma_alt{};            // from the product-of-differences form
  S rho{};
  S orthogonality{};        // <hw w>_I
  S h_norm2{};              // ||h||^2 in L^2(w)
  S hw_norm2{};
  S pythagoras_residual{};  // ||h||^2 - ||hw||^2 - gamma^2 ||1_I||^2
};

template <Scalar S>
struct ReductionReport {
  AtomIndex root = 0;
  S a2{};
  std::vector<ReductionAtom<S>> atoms;
  S sum_h_norm2{};
  S square_sum{};            // sum over D(I0) and children of |<u>_{I'}-<u>_I|^2 <w>_{I'} |I'|
  S square_normalizer{};     // [w]^2 <u>_{I0} |I0|
  double square_ratio = 0;
  std::optional<S> rho_sum;  // sum |<g w>_I| / <w>_I rho_I |I|, when g is given
  double rho_normalizer = 0; // [w] <u>_{I0}^{1/2} <g^2 w>_{I0}^{1/2} |I0|
  double rho_ratio = 0;
  S max_orthogonality{};     // largest |<hw w>_I|
  S max_pythagoras{};        // largest |pythagoras residual|
  S max_gamma_mismatch{};
  bool hw_below_h = true;
};

template <Scalar S>
ReductionReport<S> reduction_chain(const BasicFiltration<S>& f, const Weight<S>& w, AtomIndex i0,
                                   const LeafFunction<S>* g = nullptr);

enum class ScanMode { Exhaustive01, ExhaustivePM, RandomContinuous, Generation };

std::string to_string(ScanMode mode);
ScanMode parse_scan_mode(const std::string& name);

struct ScanReport {
  double max_norm = 0;
  std::vector<double> argmax_sigma;  // one coefficient per atom
  double a2 = 0;
  double ratio = 0;                  // max_norm / a2
  ScanMode mode = ScanMode::Exhaustive01;
  std::uint64_t seed = 0;
  std::uint64_t evaluated = 0;
};

inline constexpr std::size_t kExhaustiveAtomLimit = 20;

// Maximizes ||T_sigma||_{L^2(w)} over a family of symbols. Exhaustive modes
// need at most 20 atoms and at most `budget` patterns; the random mode draws
// `budget` symbols in [-1,1] and polishes the best ones by coordinate ascent.
// budget < 1 is rejected with BudgetExceeded.
ScanReport multiplier_norm_scan(const Filtration& f, const Weight<double>& w, ScanMode mode, std::uint64_t budget,
                                std::uint64_t seed);

struct ConstantEstimates {
  double c3 = 0;          // sup over {0,1} symbols
  double c4_sampled = 0;  // random draws in [-1,1]
  double c4_exact = 0;    // sup over {-1,1} symbols, which is the sup over the cube
};

ConstantEstimates unconditional_constants(const Filtration& f, const Weight<double>& w, std::uint64_t draws,
                                          std::uint64_t seed);

// ||g w||^2_{L^2(u)} - ||g||^2_{L^2(w)}
template <Scalar S>
S dual_form_residual(const BasicFiltration<S>& f, const Weight<S>& w, const LeafFunction<S>& g);

}  // namespace haarlab
