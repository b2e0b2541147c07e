#include "haarlab/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace haarlab {

namespace {

constexpr int kPowerIterations = 100000;

double power_iteration(const Eigen::MatrixXd& gram) {
  const Eigen::Index n = gram.rows();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
  double lambda = 0.0;
  for (int it = 0; it < kPowerIterations; ++it) {
    Eigen::VectorXd next = gram * v;
    const double norm = next.norm();
    if (norm == 0.0) return 0.0;
    next /= norm;
    const double est = next.dot(gram * next);
    if (std::abs(est - lambda) <= 1e-10 * std::abs(est)) return est;
    lambda = est;
    v = next;
  }
  throw Error(ErrorKind::NumericalFailure, "power iteration did not converge");
}

}  // namespace

double largest_eigenvalue(const Eigen::MatrixXd& gram) {
  if (gram.size() == 0) return 0.0;
  if (!gram.allFinite()) throw Error(ErrorKind::NumericalFailure, "operator has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() == Eigen::Success) return solver.eigenvalues().maxCoeff();
  return power_iteration(gram);
}

double operator_norm(const WeightedOperator& op) {
  const auto& t = op.matrix;
  if (static_cast<std::size_t>(t.rows()) != op.codomain_mass.size() ||
      static_cast<std::size_t>(t.cols()) != op.domain_mass.size())
    throw Error(ErrorKind::InvalidArgument, "operator shape does not match its spaces");
  std::vector<Eigen::Index> rows, cols;
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    if (op.codomain_mass[i] > 0) rows.push_back(i);
  for (Eigen::Index j = 0; j < t.cols(); ++j)
    if (op.domain_mass[j] > 0) cols.push_back(j);
  if (rows.empty() || cols.empty()) return 0.0;

  Eigen::MatrixXd a(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double sr = std::sqrt(op.codomain_mass[rows[r]]);
    for (std::size_t c = 0; c < cols.size(); ++c)
      a(r, c) = sr * t(rows[r], cols[c]) / std::sqrt(op.domain_mass[cols[c]]);
  }
  Eigen::MatrixXd gram = a.cols() <= a.rows() ? Eigen::MatrixXd(a.transpose() * a) : Eigen::MatrixXd(a * a.transpose());
  return std::sqrt(std::max(0.0, largest_eigenvalue(gram)));
}

double block_operator_norm(const WeightedOperator& op, const std::vector<std::pair<std::size_t, std::size_t>>& blocks) {
  double best = 0.0;
  for (auto [b, e] : blocks) {
    const auto n = static_cast<Eigen::Index>(e - b);
    WeightedOperator sub;
    sub.matrix = op.matrix.block(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b), n, n);
    sub.domain_mass.assign(op.domain_mass.begin() + b, op.domain_mass.begin() + e);
    sub.codomain_mass.assign(op.codomain_mass.begin() + b, op.codomain_mass.begin() + e);
    best = std::max(best, operator_norm(sub));
  }
  return best;
}

template <Scalar S>
Matrix<S> average_matrix(const BasicFiltration<S>& f, const Measure<S>& mu, AtomIndex i) {
  const auto n = static_cast<Eigen::Index>(f.leaf_count());
  Matrix<S> m = Matrix<S>::Constant(n, n, S(0));
  const auto& a = f.atom(i);
  if (mu.atom[i] == S(0)) return m;
  for (std::size_t c = a.leaf_begin; c < a.leaf_end; ++c) {
    const S coef = mu.leaf[c] / mu.atom[i];
    for (std::size_t r = a.leaf_begin; r < a.leaf_end; ++r) m(r, c) = coef;
  }
  return m;
}

template <Scalar S>
Matrix<S> difference_matrix(const BasicFiltration<S>& f, const Measure<S>& mu, AtomIndex i) {
  const auto n = static_cast<Eigen::Index>(f.leaf_count());
  Matrix<S> m = Matrix<S>::Constant(n, n, S(0));
  const auto& a = f.atom(i);
  if (!a.splits()) return m;
  m -= average_matrix(f, mu, i);
  for (AtomIndex c : a.children) m += average_matrix(f, mu, c);
  return m;
}

template <Scalar S>
Matrix<S> multiplier_matrix(const BasicFiltration<S>& f, const MultiplierSymbol<S>& sigma,
                            std::optional<AtomIndex> restrict_to) {
  const auto n = static_cast<Eigen::Index>(f.leaf_count());
  Matrix<S> m = Matrix<S>::Constant(n, n, S(0));
  AtomIndex lo = 0, hi = f.atom_count();
  if (restrict_to) {
    lo = *restrict_to;
    hi = f.atom(*restrict_to).subtree_end;
  }
  for (AtomIndex i = lo; i < hi; ++i) {
    const auto& a = f.atom(i);
    if (!a.splits() || sigma[i] == S(0)) continue;
    for (std::size_t c = a.leaf_begin; c < a.leaf_end; ++c) {
      const S coef = sigma[i] * f.measure(f.leaves()[c]) / a.measure;
      for (std::size_t r = a.leaf_begin; r < a.leaf_end; ++r) m(r, c) -= coef;
    }
    for (AtomIndex ch : a.children) {
      const auto& b = f.atom(ch);
      for (std::size_t c = b.leaf_begin; c < b.leaf_end; ++c) {
        const S coef = sigma[i] * f.measure(f.leaves()[c]) / b.measure;
        for (std::size_t r = b.leaf_begin; r < b.leaf_end; ++r) m(r, c) += coef;
      }
    }
  }
  return m;
}

#define HAARLAB_INSTANTIATE(S)                                                                     \
  template Matrix<S> average_matrix(const BasicFiltration<S>&, const Measure<S>&, AtomIndex);      \
  template Matrix<S> difference_matrix(const BasicFiltration<S>&, const Measure<S>&, AtomIndex);   \
  template Matrix<S> multiplier_matrix(const BasicFiltration<S>&, const MultiplierSymbol<S>&,      \
                                       std::optional<AtomIndex>);

HAARLAB_INSTANTIATE(double)
HAARLAB_INSTANTIATE(Rational)

}  // namespace haarlab
