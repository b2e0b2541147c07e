#pragma once

#include "haarlab/carleson.hpp"
#include "haarlab/linalg.hpp"
#include "haarlab/marttools.hpp"

namespace haarlab {

// Two measures mu_j = d_j nu; densities may vanish on some leaves.
template <Scalar S>
struct MeasurePair {
  Measure<S> mu1, mu2;

  static MeasurePair from_densities(const BasicFiltration<S>& f, const LeafFunction<S>& d1, const LeafFunction<S>& d2);
};

// max over atoms of mu1(I) mu2(I) / |I|^2
template <Scalar S>
A2Result<S> joint_a2(const BasicFiltration<S>& f, const MeasurePair<S>& pair);

// A = max over atoms and both directions of ||T_I(1_I mu_j)||_{L^2(mu_k)} / mu_j(I)^{1/2}.
template <Scalar S>
double testing_constant(const BasicFiltration<S>& f, const MultiplierSymbol<S>& sigma, const MeasurePair<S>& pair);

// f -> T_sigma(f mu1) as a matrix on leaf values.
template <Scalar S>
Matrix<S> weighted_multiplier_matrix(const BasicFiltration<S>& f, const MultiplierSymbol<S>& sigma,
                                     const Measure<S>& mu1);

struct T1Check {
  double norm = 0;       // ||T(. mu1)||_{L^2(mu1) -> L^2(mu2)}
  double joint_a2 = 0;
  double testing = 0;    // A
  double bound = 0;      // 2 joint_a2^{1/2} + 5 A
  double slack = 0;
  bool holds = true;
};

template <Scalar S>
T1Check t1_bound_check(const BasicFiltration<S>& f, const MultiplierSymbol<S>& sigma, const MeasurePair<S>& pair);

template <Scalar S>
struct Paraproducts {
  Matrix<S> t;            // T^{mu1}
  Matrix<S> pi1;          // sum_I (E_I^{mu1} f) Delta_I^{mu2}(T^{mu1} 1_I)
  Matrix<S> pi2_adjoint;  // adjoint of the mirrored paraproduct under the linear pairings
  Matrix<S> diag;         // sum_I Delta_I^{mu2} T^{mu1} Delta_I^{mu1} plus the root averages
  S residual{};           // largest entry of T - pi1 - pi2' - diag on the supports
  S annihilation{};       // largest entry of Delta_I^{mu2} pi1 Delta_{I'}^{mu1}, I' in D(I)
  double norm_t = 0, norm_pi1 = 0, norm_pi2_adjoint = 0, norm_diag = 0;
  double testing = 0, joint_a2 = 0;
  bool pi1_bound = true;   // ||pi1|| <= 2A
  bool diag_bound = true;  // ||diag|| <= A + 2 joint_a2^{1/2}
};

// Throws DegenerateMeasure when either measure vanishes identically.
template <Scalar S>
Paraproducts<S> paraproduct_decompose(const BasicFiltration<S>& f, const MultiplierSymbol<S>& sigma,
                                      const MeasurePair<S>& pair, bool check_annihilation = true);

template <Scalar S>
struct SigmaDecomposition {
  double sigma1 = 0, sigma2 = 0, sigma3 = 0, sigma4 = 0;
  double total = 0;       // sum_I |int Delta_I(f u) Delta_I(g w)|
  S vanishing_residual{}; // largest |Delta_I[(f - E_I^u f - Delta_I^u f) u]|
  S split_residual{};     // largest |Delta_I(f u) - (E_I^u f) Delta_I u - Delta_I[(Delta_I^u f) u]|, and for g
  double f_norm = 0;      // ||f||_{L^2(u)}
  double g_norm = 0;      // ||g||_{L^2(w)}
  double a2 = 0;
  double sigma1_bound = 0;        // [w]^{1/2} ||f|| ||g||
  double sigma4_rho_sum = 0;      // sum |<f>_{I,u} <g>_{I,w}| rho_I |I|
  double sigma4_duality = 0;      // ||<f>_u <g>_w||_{L^1(S^inf)} packing(rho)
  double sigma4_bound = 0;        // 4 packing(rho) ||f|| ||g||
  double sigma2_embedding = 0;    // ||g|| (sum <f>_{I,u}^2 gamma_I |I|)^{1/2}
  double sigma2_bound = 0;        // ||g|| (4 K_gamma)^{1/2} ||f||
  double sigma3_embedding = 0;
  double sigma3_bound = 0;
  bool holds = true;              // every inequality in the chain (residuals are reported separately)
};

template <Scalar S>
SigmaDecomposition<S> bilinear_sigma_decomposition(const BasicFiltration<S>& f, const Weight<S>& w,
                                                   const LeafFunction<S>& fn, const LeafFunction<S>& gn);

}  // namespace haarlab
