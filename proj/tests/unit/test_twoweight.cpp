#include <cmath>

#include "helpers.hpp"
#include "haarlab/twoweight.hpp"
#include "oracles.hpp"

using namespace haarlab;
using test::error_of;

namespace {

MeasurePair<double> random_pair(const Filtration& f, Rng& rng, double zero_probability = 0.2) {
  return MeasurePair<double>::from_densities(f, random_density(f, rng, zero_probability),
                                             random_density(f, rng, zero_probability));
}

}  // namespace

TEST_CASE("joint A2") {
  const auto f = small_tree(2, 14);
  const auto one = constant(f, 1.0), zero = constant(f, 0.0);
  CHECK(joint_a2(f, MeasurePair<double>::from_densities(f, one, one)).value == doctest::Approx(1));
  CHECK(joint_a2(f, MeasurePair<double>::from_densities(f, one, zero)).value == 0);
  Rng rng(2);
  const auto w = random_weight(f, rng);
  const auto pair = MeasurePair<double>::from_densities(f, w.u(), w.w());
  CHECK(joint_a2(f, pair).value == doctest::Approx(a2_characteristic(f, w).value).epsilon(1e-12));

  const auto inst = test::seven();
  const auto exact = MeasurePair<Rational>::from_densities(inst.tree, inst.weight.u(), inst.weight.w());
  CHECK(joint_a2(inst.tree, exact).value == a2_characteristic(inst.tree, inst.weight).value);
}

TEST_CASE("testing constant") {
  const auto f = small_tree(4, 14);
  const auto one = constant(f, 1.0);
  const auto nu = MeasurePair<double>::from_densities(f, one, one);
  CHECK(testing_constant(f, MultiplierSymbol<double>::zero(f), nu) == 0);
  Rng rng(4);
  for (int k = 0; k < 50; ++k) {
    const auto sigma = random_symbol(f, rng);
    CHECK(testing_constant(f, sigma, nu) <= 1 + 1e-12);
    const auto pair = random_pair(f, rng);
    const double a = testing_constant(f, sigma, pair);
    CHECK(a >= 0);
    CHECK(a == testing_constant(f, sigma, MeasurePair<double>{pair.mu2, pair.mu1}));
  }
}

TEST_CASE("weighted multiplier matrix") {
  const auto f = small_tree(5, 14);
  Rng rng(5);
  const auto sigma = random_symbol(f, rng);
  const auto one = constant(f, 1.0);
  const auto m = weighted_multiplier_matrix(f, sigma, Measure<double>::reference(f));
  const auto naive = oracle::multiplier(f, sigma.coefficients());
  for (std::size_t r = 0; r < f.leaf_count(); ++r)
    for (std::size_t c = 0; c < f.leaf_count(); ++c)
      CHECK(m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) == doctest::Approx(naive[r][c]).scale(1e-12));
  const auto d = random_density(f, rng);
  const auto mu = Measure<double>::with_density(f, d);
  const auto g = random_leaf_function(f, rng);
  LeafFunction<double> gd(g);
  for (std::size_t l = 0; l < gd.size(); ++l) gd[l] *= d[l];
  const auto direct = apply_multiplier(f, sigma, gd);
  const auto via = apply_matrix(weighted_multiplier_matrix(f, sigma, mu), g);
  for (std::size_t l = 0; l < g.size(); ++l) CHECK(via[l] == doctest::Approx(direct[l]).scale(1e-12));
  (void)one;
}

TEST_CASE("T1 bound") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto f = small_tree(seed, 16, 5, 3);
    Rng rng(seed);
    const auto c = t1_bound_check(f, random_symbol(f, rng), random_pair(f, rng));
    CHECK(c.holds);
    CHECK(c.norm <= c.bound * (1 + 1e-9));
  }
  const auto f = small_tree(1, 12);
  const auto one = constant(f, 1.0);
  const auto c = t1_bound_check(f, MultiplierSymbol<double>::constant(f, 1.0),
                                MeasurePair<double>::from_densities(f, one, one));
  CHECK(c.norm == doctest::Approx(1));
  CHECK(c.joint_a2 == doctest::Approx(1));
}

TEST_CASE("paraproduct decomposition") {
  const auto f = rounded_tree(small_tree(6, 10), 10);
  const auto ef = to_exact(f);
  Rng rng(6);
  const auto d1 = to_exact(random_density(f, rng, 0.2, 0.1, 10, 8));
  const auto d2 = to_exact(random_density(f, rng, 0.2, 0.1, 10, 8));
  const auto pair = MeasurePair<Rational>::from_densities(ef, d1, d2);

  const auto z = paraproduct_decompose(ef, MultiplierSymbol<Rational>::zero(ef), pair);
  CHECK(z.residual == 0);
  CHECK(z.norm_t == 0);
  CHECK(z.norm_pi1 == 0);
  CHECK(z.norm_pi2_adjoint == 0);
  CHECK(z.norm_diag == 0);

  for (int k = 0; k < 5; ++k) {
    std::vector<Rational> c(ef.atom_count());
    for (auto& x : c) x = Rational(rng.uniform_int(-8, 8), 8);
    const MultiplierSymbol<Rational> sigma(ef, c);
    const auto p = paraproduct_decompose(ef, sigma, pair);
    CHECK(p.residual == 0);
    CHECK(p.annihilation == 0);
    CHECK(p.pi1_bound);
    CHECK(p.diag_bound);
    const Matrix<Rational> sum = p.pi1 + p.pi2_adjoint + p.diag;
    CHECK(sum.rows() == p.t.rows());
  }

  const auto fz = small_tree(3, 10);
  const auto one = constant(fz, 1.0), zero = constant(fz, 0.0);
  CHECK(error_of([&] {
          paraproduct_decompose(fz, MultiplierSymbol<double>::zero(fz), MeasurePair<double>::from_densities(fz, one, zero));
        }) == ErrorKind::DegenerateMeasure);

  const auto fp = small_tree(7, 16, 5, 3);
  Rng rf(7);
  const auto pf = paraproduct_decompose(fp, random_symbol(fp, rf), random_pair(fp, rf));
  CHECK(pf.residual <= 1e-9 * std::max(1.0, pf.t.cwiseAbs().maxCoeff()));
}

TEST_CASE("bilinear sigma decomposition") {
  const auto f = small_tree(8, 16);
  Rng rng(8);
  const auto unit = Weight<double>::unit(f);
  const auto g1 = random_leaf_function(f, rng), g2 = random_leaf_function(f, rng);
  const auto flat = bilinear_sigma_decomposition(f, unit, g1, g2);
  CHECK(flat.sigma2 == 0);
  CHECK(flat.sigma3 == 0);
  CHECK(flat.sigma4 == 0);
  CHECK(flat.holds);

  const auto w = random_weight(f, rng);
  const auto z = bilinear_sigma_decomposition(f, w, constant(f, 0.0), g2);
  CHECK(z.sigma1 == 0);
  CHECK(z.sigma2 == 0);
  CHECK(z.sigma3 == 0);
  CHECK(z.sigma4 == 0);
  CHECK(z.total == 0);

  const auto ef = to_exact(rounded_tree(small_tree(9, 12), 10));
  const auto ff = to_float(ef);
  Rng re(9);
  LeafFunction<double> wv(ff.leaf_count());
  for (double& x : wv) x = std::ldexp(1.0, static_cast<int>(re.uniform_int(-4, 4)));
  const Weight<Rational> ew(ef, to_exact(wv));
  const auto s = bilinear_sigma_decomposition(ef, ew, to_exact(random_leaf_function(ff, re, 8)),
                                              to_exact(random_leaf_function(ff, re, 8)));
  CHECK(s.vanishing_residual == 0);
  CHECK(s.split_residual == 0);
  CHECK(s.holds);
  CHECK(s.total <= s.sigma1 + s.sigma2 + s.sigma3 + s.sigma4 + 1e-12);
  CHECK(s.sigma1 <= s.sigma1_bound * (1 + 1e-9));
  CHECK(s.sigma4 <= s.sigma4_rho_sum * (1 + 1e-9) + 1e-15);
}
