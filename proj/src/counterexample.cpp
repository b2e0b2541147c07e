#include "haarlab/counterexample.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "haarlab/marttools.hpp"

namespace haarlab {

Rational parse_rational(const std::string& text) {
  auto fail = [&] { return Error(ErrorKind::ParseError, "not a number: '" + text + "'"); };
  if (text.empty()) throw fail();
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw fail();
    return parse_rational(text.substr(0, slash)) / den;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') negative = text[pos++] == '-';
  boost::multiprecision::mpz_int digits = 0;
  int scale = 0;
  bool seen_digit = false, seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      seen_digit = true;
      if (seen_point) --scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw fail();
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') throw fail();
    std::size_t used = 0;
    int exponent = 0;
    try {
      exponent = std::stoi(text.substr(pos + 1), &used);
    } catch (const std::exception&) {
      throw fail();
    }
    if (used != text.size() - pos - 1) throw fail();
    scale += exponent;
  }
  Rational value(digits);
  Rational ten(10);
  for (int k = 0; k < std::abs(scale); ++k) value = scale > 0 ? value * ten : value / ten;
  return negative ? Rational(-value) : value;
}

namespace {

TreeSpec<Rational> instance_spec(const Rational& eps, const std::string& suffix) {
  TreeSpec<Rational> spec;
  spec.leaf_measures_only = true;
  auto node = [&](const std::string& id, const std::string& parent, std::optional<Rational> m) {
    spec.atoms.push_back({id + suffix, parent.empty() ? std::nullopt : std::optional<std::string>(parent + suffix), m});
  };
  node("I", "", std::nullopt);
  node("J1", "I", std::nullopt);
  node("I1", "J1", Rational(1) - eps);
  node("I2", "J1", eps);
  node("J2", "I", std::nullopt);
  node("I3", "J2", Rational(1) - eps);
  node("I4", "J2", eps);
  return spec;
}

void check_eps(const Rational& eps) {
  if (!(eps > 0 && eps < Rational(1, 2)))
    throw Error(ErrorKind::EpsilonOutOfRange, "epsilon must lie in (0, 1/2), got " + eps.str());
}

LeafFunction<Rational> instance_weight(const Rational& eps) {
  return {Rational(1), Rational(1) / eps, Rational(1), Rational(1) / eps};
}

// rank of a list of row vectors, by exact elimination
std::size_t rank(std::vector<std::vector<Rational>> rows) {
  std::size_t r = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[r]);
    for (std::size_t k = r + 1; k < rows.size(); ++k) {
      if (rows[k][c] == 0) continue;
      const Rational factor = rows[k][c] / rows[r][c];
      for (std::size_t j = c; j < cols; ++j) rows[k][j] -= factor * rows[r][j];
    }
    ++r;
  }
  return r;
}

std::vector<Rational> flatten(const Matrix<Rational>& m) {
  std::vector<Rational> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  return out;
}

}  // namespace

CounterexampleInstance build_instance(const Rational& eps) {
  check_eps(eps);
  CounterexampleInstance inst;
  inst.eps = eps;
  inst.tree = build_tree(instance_spec(eps, ""));
  inst.weight = Weight<Rational>(inst.tree, instance_weight(eps));
  inst.h1_raw = {Rational(1), Rational(1), Rational(-1), Rational(-1)};
  inst.h2_raw = {Rational(-1) / (Rational(1) - eps), Rational(1) / eps, Rational(0), Rational(0)};
  return inst;
}

Eigen::MatrixXd transform_matrix(const CounterexampleInstance& inst) {
  const auto& f = inst.tree;
  const double s1 = 1 / std::sqrt(2.0);
  const double s2 = std::sqrt(to_double(inst.eps));
  const auto n = static_cast<Eigen::Index>(f.leaf_count());
  Eigen::MatrixXd t(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      t(r, c) = s2 * to_double(inst.h2_raw[r]) * s1 * to_double(inst.h1_raw[c]) *
                to_double(f.measure(f.leaves()[static_cast<std::size_t>(c)]));
  return t;
}

CounterexampleReport verify_instance(const CounterexampleInstance& inst, double rel_tol) {
  const auto& f = inst.tree;
  const auto& w = inst.weight;
  const auto nu = Measure<Rational>::reference(f);
  CounterexampleReport rep;
  rep.eps = inst.eps;
  rep.h1_norm2 = norm_squared(inst.h1_raw, nu) / 2;
  rep.h2_norm2 = inst.eps * norm_squared(inst.h2_raw, nu);
  rep.norm_unweighted2 = rep.h1_norm2 * rep.h2_norm2;
  rep.a2_tree = a2_characteristic(f, w).value;

  rep.a2_unions = 0;
  for (unsigned mask = 1; mask < (1u << f.leaf_count()); ++mask) {
    Rational m(0), wi(0), ui(0);
    for (std::size_t l = 0; l < f.leaf_count(); ++l) {
      if (!(mask >> l & 1u)) continue;
      m += nu.leaf[l];
      wi += w.w_measure().leaf[l];
      ui += w.u_measure().leaf[l];
    }
    rep.a2_unions = std::max(rep.a2_unions, Rational(wi * ui / (m * m)));
  }

  const Rational h1_u = norm_squared(inst.h1_raw, w.u_measure()) / 2;
  const Rational h2_w = inst.eps * norm_squared(inst.h2_raw, w.w_measure());
  rep.norm_weighted2 = h1_u * h2_w;
  rep.lower_bound2 = Rational(1) / (4 * inst.eps);
  rep.norm_unweighted = std::sqrt(to_double(rep.norm_unweighted2));
  rep.norm_weighted = std::sqrt(to_double(rep.norm_weighted2));
  rep.lower_bound = 0.5 / std::sqrt(to_double(inst.eps));
  const auto wm = masses(w.w_measure());
  rep.norm_weighted_spectral = operator_norm({transform_matrix(inst), wm, wm});

  const AtomIndex root = f.index_of("I"), j1 = f.index_of("J1"), j2 = f.index_of("J2");
  rep.h1_structure = average(f, inst.h1_raw, root) == 0 && martingale_difference(f, inst.h1_raw, j1) ==
                                                               LeafFunction<Rational>(f.leaf_count(), Rational(0)) &&
                     martingale_difference(f, inst.h1_raw, j2) == LeafFunction<Rational>(f.leaf_count(), Rational(0));
  bool h2_ok = average(f, inst.h2_raw, j1) == 0;
  for (std::size_t l = f.atom(j2).leaf_begin; l < f.atom(j2).leaf_end; ++l) h2_ok = h2_ok && inst.h2_raw[l] == 0;
  for (AtomIndex c : f.atom(j1).children)
    for (std::size_t l = f.atom(c).leaf_begin; l < f.atom(c).leaf_end; ++l)
      h2_ok = h2_ok && inst.h2_raw[l] == inst.h2_raw[f.atom(c).leaf_begin];
  rep.h2_structure = h2_ok;

  std::vector<std::vector<Rational>> span;
  for (AtomIndex i = 0; i < f.atom_count(); ++i)
    if (f.atom(i).splits()) span.push_back(flatten(difference_matrix(f, nu, i)));
  const std::size_t base = rank(span);
  const auto n = static_cast<Eigen::Index>(f.leaf_count());
  Matrix<Rational> t(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      t(r, c) = inst.h2_raw[r] * inst.h1_raw[c] * f.measure(f.leaves()[static_cast<std::size_t>(c)]);
  span.push_back(flatten(t));
  rep.not_multiplier = rank(span) == base + 1;

  const bool spectral_ok =
      std::abs(rep.norm_weighted_spectral - rep.norm_weighted) <= rel_tol * rep.norm_weighted;
  rep.claims_hold = rep.h1_norm2 == 1 && rep.h2_norm2 <= 2 && rep.norm_unweighted2 <= 2 && rep.a2_tree <= 2 &&
                    rep.a2_unions <= 3 && rep.norm_weighted2 >= rep.lower_bound2 && spectral_ok && rep.h1_structure &&
                    rep.h2_structure && rep.not_multiplier;
  return rep;
}

DirectSum build_direct_sum(const std::vector<Rational>& eps_list) {
  TreeSpec<Rational> spec;
  spec.leaf_measures_only = true;
  LeafFunction<Rational> weights;
  std::vector<Eigen::MatrixXd> blocks;
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    check_eps(eps_list[k]);
    const auto part = instance_spec(eps_list[k], "#" + std::to_string(k));
    spec.atoms.insert(spec.atoms.end(), part.atoms.begin(), part.atoms.end());
    const auto wk = instance_weight(eps_list[k]);
    weights.insert(weights.end(), wk.begin(), wk.end());
    blocks.push_back(transform_matrix(build_instance(eps_list[k])));
  }
  DirectSum d;
  d.tree = build_tree(spec);
  d.weight = Weight<Rational>(d.tree, weights);
  const Eigen::Index n = static_cast<Eigen::Index>(4 * blocks.size());
  d.transform = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < blocks.size(); ++k)
    d.transform.block(static_cast<Eigen::Index>(4 * k), static_cast<Eigen::Index>(4 * k), 4, 4) = blocks[k];
  return d;
}

std::vector<CounterexampleReport> sweep(const std::vector<Rational>& eps_list) {
  std::vector<CounterexampleReport> rows;
  for (const Rational& e : eps_list) rows.push_back(verify_instance(build_instance(e)));
  return rows;
}

std::string sweep_csv(const std::vector<CounterexampleReport>& rows) {
  std::ostringstream out;
  out << "epsilon,a2_tree,a2_unions,norm_unweighted,norm_weighted,lower_bound\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.16g,%.16g,%.16g,%.16g,%.16g,%.16g\n", to_double(r.eps), to_double(r.a2_tree),
                  to_double(r.a2_unions), r.norm_unweighted, r.norm_weighted, r.lower_bound);
    out << buf;
  }
  return out.str();
}

}  // namespace haarlab
