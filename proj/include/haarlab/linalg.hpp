#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>

#include "haarlab/functions.hpp"

namespace haarlab {

template <Scalar S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

// A matrix acting on leaf-value vectors between two weighted L^2 spaces.
// Rows are codomain leaves, columns are domain leaves; the masses are the
// per-leaf measures of the two spaces (zero entries are quotiented out).
struct WeightedOperator {
  Eigen::MatrixXd matrix;
  std::vector<double> domain_mass;
  std::vector<double> codomain_mass;
};

// Largest singular value of D_out^{1/2} T D_in^{-1/2}, restricted to leaves
// of positive mass.
double operator_norm(const WeightedOperator& op);

// Same norm for an operator whose matrix is block diagonal over the given
// leaf ranges [begin, end).
double block_operator_norm(const WeightedOperator& op, const std::vector<std::pair<std::size_t, std::size_t>>& blocks);

// Largest eigenvalue of a symmetric positive semidefinite matrix.
double largest_eigenvalue(const Eigen::MatrixXd& gram);

template <Scalar S>
Eigen::MatrixXd to_double_matrix(const Matrix<S>& m) {
  if constexpr (is_exact_v<S>) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
    return out;
  } else {
    return m;
  }
}

template <Scalar S>
std::vector<double> masses(const Measure<S>& mu) {
  std::vector<double> out;
  out.reserve(mu.leaf.size());
  for (const S& x : mu.leaf) out.push_back(to_double(x));
  return out;
}

// E_I^mu as a matrix (zero when mu(I) = 0).
template <Scalar S>
Matrix<S> average_matrix(const BasicFiltration<S>& f, const Measure<S>& mu, AtomIndex i);

// Delta_I^mu as a matrix; zero for atoms with a single child.
template <Scalar S>
Matrix<S> difference_matrix(const BasicFiltration<S>& f, const Measure<S>& mu, AtomIndex i);

// T_sigma (reference measure) as a matrix, optionally localized to D(i0).
template <Scalar S>
Matrix<S> multiplier_matrix(const BasicFiltration<S>& f, const MultiplierSymbol<S>& sigma,
                            std::optional<AtomIndex> restrict_to = std::nullopt);

template <Scalar S>
LeafFunction<S> apply_matrix(const Matrix<S>& m, const LeafFunction<S>& g) {
  LeafFunction<S> out(static_cast<std::size_t>(m.rows()), S(0));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    S acc(0);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) != S(0)) acc += m(i, j) * g[static_cast<std::size_t>(j)];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

}  // namespace haarlab
