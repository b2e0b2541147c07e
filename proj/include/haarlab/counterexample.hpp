#pragma once

#include <string>
#include <vector>

#include "haarlab/functions.hpp"
#include "haarlab/linalg.hpp"

namespace haarlab {

// Seven-atom tree: I (mass 2) -> J1, J2 (mass 1) -> I1..I4 with masses
// (1-e, e, 1-e, e); weight 1 on I1, I3 and 1/e on I2, I4. The transform is
// T f = (f, h1) h2 with h1 = 2^{-1/2}(1_{J1} - 1_{J2}) and
// h2 = e^{-1/2} 1_{I2} - e^{1/2}(1-e)^{-1} 1_{I1}.
struct CounterexampleInstance {
  Rational eps;
  ExactFiltration tree;
  Weight<Rational> weight;
  LeafFunction<Rational> h1_raw;  // h1 = 2^{-1/2} h1_raw
  LeafFunction<Rational> h2_raw;  // h2 = e^{1/2} h2_raw
};

// Exact value of a decimal ("0.01", "1e-4") or fraction ("1/100") string.
Rational parse_rational(const std::string& text);

// Throws EpsilonOutOfRange unless 0 < eps < 1/2.
CounterexampleInstance build_instance(const Rational& eps);

struct CounterexampleReport {
  Rational eps;
  Rational h1_norm2;          // ||h1||^2 in L^2
  Rational h2_norm2;
  Rational norm_unweighted2;  // ||T||^2 = ||h1||^2 ||h2||^2
  Rational a2_tree;           // over the seven atoms
  Rational a2_unions;         // over all nonempty unions of I1..I4
  Rational norm_weighted2;    // ||h1||^2_{L^2(u)} ||h2||^2_{L^2(w)}
  Rational lower_bound2;      // 1 / (4 eps)
  double norm_unweighted = 0;
  double norm_weighted = 0;
  double norm_weighted_spectral = 0;  // eigensolver on the assembled matrix
  double lower_bound = 0;             // eps^{-1/2} / 2
  bool h1_structure = false;  // orthogonal to 1_I, constant on J1 and J2
  bool h2_structure = false;  // supported on J1, constant on its children, mean zero
  bool not_multiplier = false;  // T is outside the span of the Delta_I
  bool claims_hold = false;
};

CounterexampleReport verify_instance(const CounterexampleInstance& inst, double rel_tol = 1e-9);

// Leaf matrix of T in the reference pairing: T[r][c] = h2(r) h1(c) |L_c|.
Eigen::MatrixXd transform_matrix(const CounterexampleInstance& inst);

// Direct sum over several epsilons: one root per value, ids suffixed with the index.
struct DirectSum {
  ExactFiltration tree;
  Weight<Rational> weight;
  Eigen::MatrixXd transform;  // block diagonal
};

DirectSum build_direct_sum(const std::vector<Rational>& eps_list);

std::vector<CounterexampleReport> sweep(const std::vector<Rational>& eps_list);

// epsilon,a2_tree,a2_unions,norm_unweighted,norm_weighted,lower_bound
std::string sweep_csv(const std::vector<CounterexampleReport>& rows);

}  // namespace haarlab
