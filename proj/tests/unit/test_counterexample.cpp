#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "haarlab/counterexample.hpp"
#include "haarlab/marttools.hpp"
#include "oracles.hpp"

using namespace haarlab;
using test::error_of;

TEST_CASE("parsing epsilons") {
  CHECK(parse_rational("0.01") == Rational(1, 100));
  CHECK(parse_rational("1/100") == Rational(1, 100));
  CHECK(parse_rational("1e-4") == Rational(1, 10000));
  CHECK(parse_rational("2.5E1") == 25);
  CHECK(parse_rational("-3") == -3);
  for (const char* bad : {"", "abc", "1/0", "1e", "0.1x"}) CHECK(error_of([&] { parse_rational(bad); }) == ErrorKind::ParseError);
}

TEST_CASE("instance construction") {
  const auto inst = build_instance(Rational(1, 4));
  const auto& f = inst.tree;
  CHECK(f.atom_count() == 7);
  CHECK(f.measure(f.index_of("I")) == 2);
  CHECK(f.measure(f.index_of("I1")) == Rational(3, 4));
  CHECK(f.measure(f.index_of("I2")) == Rational(1, 4));
  CHECK(f.measure(f.index_of("I3")) == Rational(3, 4));
  CHECK(f.measure(f.index_of("I4")) == Rational(1, 4));
  const std::vector<Rational> w{1, 4, 1, 4};
  CHECK(inst.weight.w() == w);
  for (const char* e : {"0", "1/2", "0.6", "-0.1"})
    CHECK(error_of([&] { build_instance(parse_rational(e)); }) == ErrorKind::EpsilonOutOfRange);
}

TEST_CASE("reports match the closed forms") {
  for (const char* text : {"0.1", "0.01", "1/3", "1e-3", "1e-4", "0.49"}) {
    const Rational e = parse_rational(text);
    const auto r = verify_instance(build_instance(e));
    const auto o = oracle::counterexample(to_double(e));
    CHECK(to_double(r.h1_norm2) == doctest::Approx(o.h1_norm2));
    CHECK(to_double(r.h2_norm2) == doctest::Approx(o.h2_norm2));
    CHECK(to_double(r.a2_tree) == doctest::Approx(o.a2_tree));
    CHECK(to_double(r.a2_unions) == doctest::Approx(o.a2_unions));
    CHECK(r.norm_weighted == doctest::Approx(o.norm_weighted));
    CHECK(r.norm_weighted_spectral == doctest::Approx(r.norm_weighted).epsilon(1e-9));
    CHECK(r.norm_weighted >= r.lower_bound);
    CHECK(r.lower_bound2 * 4 * e == 1);
    CHECK(r.a2_tree <= 2);
    CHECK(r.h1_structure);
    CHECK(r.h2_structure);
    CHECK(r.not_multiplier);
    CHECK(r.claims_hold);
  }
  const auto r = verify_instance(build_instance(Rational(1, 100)));
  CHECK(r.norm_weighted == doctest::Approx(9.950879408881459).epsilon(1e-12));
  CHECK(r.h1_norm2 == 1);
}

TEST_CASE("transform matrix") {
  const auto inst = build_instance(Rational(1, 10));
  const auto t = transform_matrix(inst);
  CHECK(t.rows() == 4);
  CHECK(t.cols() == 4);
  const double e = 0.1;
  // T 1_{I1} = (1_{I1}, h1) h2 with h1 = 2^{-1/2} on J1
  CHECK(t(1, 0) == doctest::Approx(std::pow(e, -0.5) * (1 - e) / std::sqrt(2.0)));
  CHECK(t(2, 0) == 0);
  CHECK(t(0, 2) == doctest::Approx(-t(0, 0)));
  const Eigen::MatrixXd t2 = t * t;
  CHECK(t2.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("sweeps") {
  const std::vector<Rational> eps{parse_rational("0.1"), parse_rational("0.01"), parse_rational("1e-3"),
                                  parse_rational("1e-4")};
  const auto rows = sweep(eps);
  REQUIRE(rows.size() == 4);
  const double expect[] = {1.5811388300841898, 5, 15.811388300841896, 50};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].lower_bound == doctest::Approx(expect[k]));
    if (k) CHECK(rows[k].norm_weighted > rows[k - 1].norm_weighted);
  }
  const auto csv = sweep_csv(rows);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "epsilon,a2_tree,a2_unions,norm_unweighted,norm_weighted,lower_bound");
  int count = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++count;
  CHECK(count == 4);
  CHECK(sweep({parse_rational("0.3")}).size() == 1);
}

TEST_CASE("direct sum") {
  const std::vector<Rational> eps{Rational(1, 10), Rational(1, 100)};
  const auto d = build_direct_sum(eps);
  CHECK(d.tree.atom_count() == 14);
  CHECK(d.tree.roots().size() == 2);
  CHECK(d.transform.rows() == 8);
  CHECK(d.transform.block(0, 4, 4, 4).cwiseAbs().maxCoeff() == 0);
  CHECK(d.transform.block(4, 0, 4, 4).cwiseAbs().maxCoeff() == 0);
  const auto ft = to_float(d.tree);
  const Weight<double> w(ft, to_float(d.weight.w()));
  CHECK(to_double(a2_characteristic(d.tree, d.weight).value) <= 2);
  const WeightedOperator op{d.transform, masses(w.w_measure()), masses(w.w_measure())};
  CHECK(operator_norm(op) == doctest::Approx(verify_instance(build_instance(Rational(1, 100))).norm_weighted));
}
