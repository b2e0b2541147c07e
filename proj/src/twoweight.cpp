#include "haarlab/twoweight.hpp"

#include <cmath>

namespace haarlab {

template <Scalar S>
MeasurePair<S> MeasurePair<S>::from_densities(const BasicFiltration<S>& f, const LeafFunction<S>& d1,
                                              const LeafFunction<S>& d2) {
  return {Measure<S>::with_density(f, d1), Measure<S>::with_density(f, d2)};
}

template <Scalar S>
A2Result<S> joint_a2(const BasicFiltration<S>& f, const MeasurePair<S>& pair) {
  A2Result<S> best{S(0), 0};
  for (AtomIndex i = 0; i < f.atom_count(); ++i) {
    const S m = f.measure(i);
    const S v = pair.mu1.atom[i] * pair.mu2.atom[i] / (m * m);
    if (v > best.value) best = {v, i};
  }
  return best;
}

namespace {

template <Scalar S>
LeafFunction<S> density(const BasicFiltration<S>& f, const Measure<S>& mu) {
  LeafFunction<S> d(f.leaf_count());
  for (std::size_t l = 0; l < d.size(); ++l) d[l] = mu.leaf[l] / f.measure(f.leaves()[l]);
  return d;
}

template <Scalar S>
void require_nondegenerate(const BasicFiltration<S>& f, const MeasurePair<S>& pair) {
  if (pair.mu1.total(f) == S(0) || pair.mu2.total(f) == S(0))
    throw Error(ErrorKind::DegenerateMeasure, "a measure of the pair vanishes identically");
}

// ||T_I(1_I d_from nu)||^2 in L^2(to) / from(I), maximized over atoms.
template <Scalar S>
double one_sided_testing(const BasicFiltration<S>& f, const MultiplierSymbol<S>& sigma, const Measure<S>& from,
                         const Measure<S>& to) {
  const LeafFunction<S> d = density(f, from);
  double best = 0;
  for (AtomIndex i = 0; i < f.atom_count(); ++i) {
    if (from.atom[i] == S(0)) continue;
    const auto& a = f.atom(i);
    LeafFunction<S> g(f.leaf_count(), S(0));
    for (std::size_t l = a.leaf_begin; l < a.leaf_end; ++l) g[l] = d[l];
    const LeafFunction<S> tg = apply_multiplier(f, sigma, g, i);
    best = std::max(best, to_double(S(norm_squared(tg, to) / from.atom[i])));
  }
  return std::sqrt(best);
}

template <Scalar S>
WeightedOperator as_operator(const Matrix<S>& m, const Measure<S>& domain, const Measure<S>& codomain) {
  return {to_double_matrix(m), masses(domain), masses(codomain)};
}

template <Scalar S>
Matrix<S> scale_columns(Matrix<S> m, const LeafFunction<S>& d) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) *= d[static_cast<std::size_t>(c)];
  return m;
}

template <Scalar S>
Matrix<S> zeros(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return Matrix<S>::Constant(k, k, S(0));
}

// sum_I Delta_I^{mu_out}(T^{mu_in} 1_I) (x) (E_I^{mu_in} as a row)
template <Scalar S>
Matrix<S> paraproduct(const BasicFiltration<S>& f, const Matrix<S>& t_in, const Measure<S>& mu_in,
                      const std::vector<Matrix<S>>& diff_out) {
  Matrix<S> out = zeros<S>(f.leaf_count());
  for (AtomIndex i = 0; i < f.atom_count(); ++i) {
    const auto& a = f.atom(i);
    if (!a.splits() || mu_in.atom[i] == S(0)) continue;
    using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
    Vec ind = Vec::Constant(static_cast<Eigen::Index>(f.leaf_count()), S(0));
    for (std::size_t l = a.leaf_begin; l < a.leaf_end; ++l) ind(static_cast<Eigen::Index>(l)) = S(1);
    const Vec v = diff_out[i] * (t_in * ind);
    for (std::size_t l = a.leaf_begin; l < a.leaf_end; ++l) {
      const S e = mu_in.leaf[l] / mu_in.atom[i];
      if (e == S(0)) continue;
      out.col(static_cast<Eigen::Index>(l)) += v * e;
    }
  }
  return out;
}

}  // namespace

template <Scalar S>
double testing_constant(const BasicFiltration<S>& f, const MultiplierSymbol<S>& sigma, const MeasurePair<S>& pair) {
  return std::max(one_sided_testing(f, sigma, pair.mu1, pair.mu2), one_sided_testing(f, sigma, pair.mu2, pair.mu1));
}

template <Scalar S>
Matrix<S> weighted_multiplier_matrix(const BasicFiltration<S>& f, const MultiplierSymbol<S>& sigma,
                                     const Measure<S>& mu1) {
  return scale_columns(multiplier_matrix(f, sigma), density(f, mu1));
}

template <Scalar S>
T1Check t1_bound_check(const BasicFiltration<S>& f, const MultiplierSymbol<S>& sigma, const MeasurePair<S>& pair) {
  require_nondegenerate(f, pair);
  T1Check c;
  c.norm = operator_norm(as_operator(weighted_multiplier_matrix(f, sigma, pair.mu1), pair.mu1, pair.mu2));
  c.joint_a2 = to_double(joint_a2(f, pair).value);
  c.testing = testing_constant(f, sigma, pair);
  c.bound = 2 * std::sqrt(c.joint_a2) + 5 * c.testing;
  c.slack = c.bound - c.norm;
  c.holds = c.norm <= c.bound * (1 + 1e-9) + 1e-12;
  return c;
}

template <Scalar S>
Paraproducts<S> paraproduct_decompose(const BasicFiltration<S>& f, const MultiplierSymbol<S>& sigma,
                                      const MeasurePair<S>& pair, bool check_annihilation) {
  require_nondegenerate(f, pair);
  const std::size_t n = f.leaf_count();
  const auto& mu1 = pair.mu1;
  const auto& mu2 = pair.mu2;
  std::vector<Matrix<S>> d1(f.atom_count()), d2(f.atom_count());
  for (AtomIndex i = 0; i < f.atom_count(); ++i) {
    if (!f.atom(i).splits()) continue;
    d1[i] = difference_matrix(f, mu1, i);
    d2[i] = difference_matrix(f, mu2, i);
  }

  Paraproducts<S> p;
  const Matrix<S> m = multiplier_matrix(f, sigma);
  p.t = scale_columns(m, density(f, mu1));
  const Matrix<S> t2 = scale_columns(m, density(f, mu2));
  p.pi1 = paraproduct(f, p.t, mu1, d2);
  const Matrix<S> pi2 = paraproduct(f, t2, mu2, d1);

  p.pi2_adjoint = zeros<S>(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (mu2.leaf[r] == S(0)) continue;
    for (std::size_t c = 0; c < n; ++c) {
      const auto ri = static_cast<Eigen::Index>(r), ci = static_cast<Eigen::Index>(c);
      p.pi2_adjoint(ri, ci) = pi2(ci, ri) * mu1.leaf[c] / mu2.leaf[r];
    }
  }

  p.diag = zeros<S>(n);
  for (AtomIndex i = 0; i < f.atom_count(); ++i)
    if (f.atom(i).splits()) p.diag += d2[i] * p.t * d1[i];
  for (AtomIndex r : f.roots()) p.diag += average_matrix(f, mu2, r) * p.t * average_matrix(f, mu1, r);

  const Matrix<S> rest = p.t - p.pi1 - p.pi2_adjoint - p.diag;
  p.residual = S(0);
  for (std::size_t r = 0; r < n; ++r) {
    if (mu2.leaf[r] == S(0)) continue;
    for (std::size_t c = 0; c < n; ++c) {
      if (mu1.leaf[c] == S(0)) continue;
      p.residual = std::max(p.residual, abs_value(S(rest(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)))));
    }
  }

  p.annihilation = S(0);
  if (check_annihilation) {
    for (AtomIndex i = 0; i < f.atom_count(); ++i) {
      if (!f.atom(i).splits()) continue;
      const Matrix<S> left = d2[i] * p.pi1;
      for (AtomIndex j = i; j < f.atom(i).subtree_end; ++j) {
        if (!f.atom(j).splits()) continue;
        const Matrix<S> z = left * d1[j];
        for (Eigen::Index r = 0; r < z.rows(); ++r)
          for (Eigen::Index c = 0; c < z.cols(); ++c) p.annihilation = std::max(p.annihilation, abs_value(S(z(r, c))));
      }
    }
  }

  p.norm_t = operator_norm(as_operator(p.t, mu1, mu2));
  p.norm_pi1 = operator_norm(as_operator(p.pi1, mu1, mu2));
  p.norm_pi2_adjoint = operator_norm(as_operator(p.pi2_adjoint, mu1, mu2));
  p.norm_diag = operator_norm(as_operator(p.diag, mu1, mu2));
  p.testing = testing_constant(f, sigma, pair);
  p.joint_a2 = to_double(joint_a2(f, pair).value);
  const double tol = 1e-9;
  p.pi1_bound = p.norm_pi1 <= 2 * p.testing * (1 + tol) + 1e-12;
  p.diag_bound = p.norm_diag <= (p.testing + 2 * std::sqrt(p.joint_a2)) * (1 + tol) + 1e-12;
  return p;
}

template <Scalar S>
SigmaDecomposition<S> bilinear_sigma_decomposition(const BasicFiltration<S>& f, const Weight<S>& w,
                                                   const LeafFunction<S>& fn, const LeafFunction<S>& gn) {
  check_leaf_function(f, fn);
  check_leaf_function(f, gn);
  const auto nu = Measure<S>::reference(f);
  const auto& um = w.u_measure();
  const auto& wm = w.w_measure();
  const std::size_t n = f.leaf_count();

  LeafFunction<S> fu(n), gw(n);
  for (std::size_t l = 0; l < n; ++l) {
    fu[l] = fn[l] * w.u()[l];
    gw[l] = gn[l] * w.w()[l];
  }
  const TreeFunction<S> ef = averages(f, fn, um);
  const TreeFunction<S> eg = averages(f, gn, wm);

  SigmaDecomposition<S> d;
  S s1(0), s2(0), s3(0), s4(0), total(0);
  for (AtomIndex i = 0; i < f.atom_count(); ++i) {
    const auto& a = f.atom(i);
    if (!a.splits()) continue;
    const LeafFunction<S> dfu = martingale_difference(f, fu, i, nu);
    const LeafFunction<S> dgw = martingale_difference(f, gw, i, nu);
    const LeafFunction<S> du = martingale_difference(f, w.u(), i, nu);
    const LeafFunction<S> dw = martingale_difference(f, w.w(), i, nu);
    const LeafFunction<S> duf = martingale_difference(f, fn, i, um);
    const LeafFunction<S> dwg = martingale_difference(f, gn, i, wm);

    LeafFunction<S> small_f(n, S(0)), small_g(n, S(0)), rest_f(n, S(0)), rest_g(n, S(0));
    for (std::size_t l = a.leaf_begin; l < a.leaf_end; ++l) {
      small_f[l] = duf[l] * w.u()[l];
      small_g[l] = dwg[l] * w.w()[l];
      rest_f[l] = (fn[l] - ef[i] - duf[l]) * w.u()[l];
      rest_g[l] = (gn[l] - eg[i] - dwg[l]) * w.w()[l];
    }
    const LeafFunction<S> a_f = martingale_difference(f, small_f, i, nu);
    const LeafFunction<S> b_g = martingale_difference(f, small_g, i, nu);
    const LeafFunction<S> van_f = martingale_difference(f, rest_f, i, nu);
    const LeafFunction<S> van_g = martingale_difference(f, rest_g, i, nu);

    S t1(0), t2(0), t3(0), t4(0), tt(0);
    for (std::size_t l = a.leaf_begin; l < a.leaf_end; ++l) {
      const S m = nu.leaf[l];
      d.vanishing_residual = std::max({d.vanishing_residual, abs_value(van_f[l]), abs_value(van_g[l])});
      d.split_residual = std::max({d.split_residual, abs_value(S(dfu[l] - ef[i] * du[l] - a_f[l])),
                                   abs_value(S(dgw[l] - eg[i] * dw[l] - b_g[l]))});
      t1 += a_f[l] * b_g[l] * m;
      t2 += b_g[l] * ef[i] * du[l] * m;
      t3 += a_f[l] * eg[i] * dw[l] * m;
      t4 += ef[i] * eg[i] * du[l] * dw[l] * m;
      tt += dfu[l] * dgw[l] * m;
    }
    s1 += abs_value(t1);
    s2 += abs_value(t2);
    s3 += abs_value(t3);
    s4 += abs_value(t4);
    total += abs_value(tt);
  }
  d.sigma1 = to_double(s1);
  d.sigma2 = to_double(s2);
  d.sigma3 = to_double(s3);
  d.sigma4 = to_double(s4);
  d.total = to_double(total);
  d.f_norm = std::sqrt(to_double(norm_squared(fn, um)));
  d.g_norm = std::sqrt(to_double(norm_squared(gn, wm)));
  d.a2 = to_double(a2_characteristic(f, w).value);
  const double fg = d.f_norm * d.g_norm;
  d.sigma1_bound = std::sqrt(d.a2) * fg;

  const TreeFunction<S> rho = rho_sequence(f, w);
  TreeFunction<S> phi(f.atom_count());
  S rho_sum(0);
  for (AtomIndex i = 0; i < f.atom_count(); ++i) {
    phi[i] = ef[i] * eg[i];
    rho_sum += abs_value(phi[i]) * rho[i] * f.measure(i);
  }
  const double k_rho = packing_constant(f, rho).constant;
  d.sigma4_rho_sum = to_double(rho_sum);
  d.sigma4_duality = outer_Lp_norm(f, phi, 1.0, nu) * k_rho;
  d.sigma4_bound = 4 * k_rho * fg;

  const TreeFunction<S> gam = gamma_sequence(f, w);
  const TreeFunction<S> gam_swapped = gamma_sequence(f, w.swapped(f));
  S emb_f(0), emb_g(0);
  for (AtomIndex i = 0; i < f.atom_count(); ++i) {
    emb_f += ef[i] * ef[i] * gam[i] * f.measure(i);
    emb_g += eg[i] * eg[i] * gam_swapped[i] * f.measure(i);
  }
  d.sigma2_embedding = d.g_norm * std::sqrt(to_double(emb_f));
  d.sigma2_bound = d.g_norm * std::sqrt(4 * packing_constant(f, gam, &um).constant) * d.f_norm;
  d.sigma3_embedding = d.f_norm * std::sqrt(to_double(emb_g));
  d.sigma3_bound = d.f_norm * std::sqrt(4 * packing_constant(f, gam_swapped, &wm).constant) * d.g_norm;

  auto le = [](double a, double b) { return a <= b * (1 + 1e-9) + 1e-12; };
  d.holds = le(d.total, d.sigma1 + d.sigma2 + d.sigma3 + d.sigma4) && le(d.sigma1, d.sigma1_bound) &&
            le(d.sigma4, d.sigma4_rho_sum) && le(d.sigma4_rho_sum, d.sigma4_duality) &&
            le(d.sigma4_duality, d.sigma4_bound) && le(d.sigma2, d.sigma2_embedding) &&
            le(d.sigma2_embedding, d.sigma2_bound) && le(d.sigma3, d.sigma3_embedding) &&
            le(d.sigma3_embedding, d.sigma3_bound);
  return d;
}

#define HAARLAB_INSTANTIATE(S)                                                                                     \
  template struct MeasurePair<S>;                                                                                  \
  template A2Result<S> joint_a2(const BasicFiltration<S>&, const MeasurePair<S>&);                                 \
  template double testing_constant(const BasicFiltration<S>&, const MultiplierSymbol<S>&, const MeasurePair<S>&);  \
  template Matrix<S> weighted_multiplier_matrix(const BasicFiltration<S>&, const MultiplierSymbol<S>&,             \
                                                const Measure<S>&);                                                \
  template T1Check t1_bound_check(const BasicFiltration<S>&, const MultiplierSymbol<S>&, const MeasurePair<S>&);   \
  template Paraproducts<S> paraproduct_decompose(const BasicFiltration<S>&, const MultiplierSymbol<S>&,            \
                                                 const MeasurePair<S>&, bool);                                     \
  template SigmaDecomposition<S> bilinear_sigma_decomposition(const BasicFiltration<S>&, const Weight<S>&,         \
                                                              const LeafFunction<S>&, const LeafFunction<S>&);

HAARLAB_INSTANTIATE(double)
HAARLAB_INSTANTIATE(Rational)

}  // namespace haarlab
