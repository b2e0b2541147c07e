#include "haarlab/marttools.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "haarlab/random.hpp"

namespace haarlab {

template <Scalar S>
S average(const BasicFiltration<S>& f, const LeafFunction<S>& g, AtomIndex i, const Measure<S>& mu) {
  check_leaf_function(f, g);
  if (mu.atom.at(i) == S(0)) throw Error(ErrorKind::ZeroMass, "atom '" + f.atom(i).id + "' has zero mass");
  const auto& a = f.atom(i);
  S sum(0);
  for (std::size_t l = a.leaf_begin; l < a.leaf_end; ++l) sum += g[l] * mu.leaf[l];
  return sum / mu.atom[i];
}

template <Scalar S>
TreeFunction<S> averages(const BasicFiltration<S>& f, const LeafFunction<S>& g, const Measure<S>& mu) {
  check_leaf_function(f, g);
  TreeFunction<S> integral(f.atom_count(), S(0));
  for (AtomIndex i = f.atom_count(); i-- > 0;) {
    const auto& a = f.atom(i);
    if (a.is_leaf()) {
      integral[i] = g[a.leaf_begin] * mu.leaf[a.leaf_begin];
    } else {
      for (AtomIndex c : a.children) integral[i] += integral[c];
    }
  }
  for (AtomIndex i = 0; i < f.atom_count(); ++i) integral[i] = mu.atom[i] == S(0) ? S(0) : S(integral[i] / mu.atom[i]);
  return integral;
}

template <Scalar S>
LeafFunction<S> martingale_difference(const BasicFiltration<S>& f, const LeafFunction<S>& g, AtomIndex i,
                                      const Measure<S>& mu) {
  const S parent = average(f, g, i, mu);
  LeafFunction<S> out(f.leaf_count(), S(0));
  const auto& a = f.atom(i);
  if (!a.splits()) return out;
  for (AtomIndex c : a.children) {
    const S child = mu.atom[c] == S(0) ? S(0) : average(f, g, c, mu);
    const auto& b = f.atom(c);
    for (std::size_t l = b.leaf_begin; l < b.leaf_end; ++l) out[l] = child - parent;
  }
  return out;
}

template <Scalar S>
LeafFunction<S> apply_multiplier(const BasicFiltration<S>& f, const MultiplierSymbol<S>& sigma,
                                 const LeafFunction<S>& g, std::optional<AtomIndex> restrict_to) {
  if (sigma.size() != f.atom_count()) throw Error(ErrorKind::InvalidArgument, "symbol does not match the tree");
  const TreeFunction<S> avg = averages(f, g, Measure<S>::reference(f));
  LeafFunction<S> out(f.leaf_count(), S(0));
  AtomIndex lo = 0, hi = f.atom_count();
  if (restrict_to) {
    lo = *restrict_to;
    hi = f.atom(lo).subtree_end;
  }
  for (AtomIndex i = lo; i < hi; ++i) {
    const auto& a = f.atom(i);
    if (!a.splits() || sigma[i] == S(0)) continue;
    for (AtomIndex c : a.children) {
      const S d = sigma[i] * (avg[c] - avg[i]);
      const auto& b = f.atom(c);
      for (std::size_t l = b.leaf_begin; l < b.leaf_end; ++l) out[l] += d;
    }
  }
  return out;
}

template <Scalar S>
A2Result<S> a2_characteristic(const BasicFiltration<S>& f, const Weight<S>& w) {
  const auto nu = Measure<S>::reference(f);
  const TreeFunction<S> aw = averages(f, w.w(), nu);
  const TreeFunction<S> au = averages(f, w.u(), nu);
  A2Result<S> best{aw[0] * au[0], 0};
  for (AtomIndex i = 1; i < f.atom_count(); ++i) {
    const S v = aw[i] * au[i];
    if (v > best.value) best = {v, i};
  }
  return best;
}

template <Scalar S>
S norm_squared(const LeafFunction<S>& g, const Measure<S>& mu) {
  if (g.size() != mu.leaf.size()) throw Error(ErrorKind::InvalidArgument, "function and measure sizes differ");
  S sum(0);
  for (std::size_t l = 0; l < g.size(); ++l) sum += g[l] * g[l] * mu.leaf[l];
  return sum;
}

WeightedOperator multiplier_operator(const Filtration& f, const MultiplierSymbol<double>& sigma,
                                     const Weight<double>& w) {
  return {multiplier_matrix(f, sigma), masses(w.w_measure()), masses(w.w_measure())};
}

WeightedOperator average_operator(const Filtration& f, AtomIndex i, const Weight<double>& w) {
  return {average_matrix(f, Measure<double>::reference(f), i), masses(w.w_measure()), masses(w.w_measure())};
}

std::vector<AtomIndex> atoms_alive_at(const Filtration& f, int generation) {
  std::vector<AtomIndex> out;
  for (AtomIndex i = 0; i < f.atom_count(); ++i) {
    const auto& a = f.atom(i);
    if (a.generation == generation || (a.is_leaf() && a.generation < generation)) out.push_back(i);
  }
  return out;
}

double partial_sum_norm(const Filtration& f, const Weight<double>& w, int m, int n) {
  if (m < 0 || n < m || n > f.depth())
    throw Error(ErrorKind::GenerationOutOfRange, "need 0 <= m <= n <= " + std::to_string(f.depth()));
  MultiplierSymbol<double> sigma = MultiplierSymbol<double>::zero(f);
  std::vector<double> c(f.atom_count(), 0.0);
  for (AtomIndex i = 0; i < f.atom_count(); ++i) {
    const int k = f.atom(i).generation + 1;
    if (k >= m && k <= n) c[i] = 1.0;
  }
  sigma = MultiplierSymbol<double>(f, c);
  const WeightedOperator op = multiplier_operator(f, sigma, w);
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (AtomIndex i : atoms_alive_at(f, std::max(m - 1, 0))) blocks.emplace_back(f.atom(i).leaf_begin, f.atom(i).leaf_end);
  return block_operator_norm(op, blocks);
}

PartialSumMax max_partial_sum_norm(const Filtration& f, const Weight<double>& w) {
  PartialSumMax best;
  for (int m = 1; m < f.depth(); ++m) {
    for (int n = m; n < f.depth(); ++n) {
      const double v = partial_sum_norm(f, w, m, n);
      if (v > best.value) best = {v, m, n};
    }
  }
  return best;
}

template <Scalar S>
ReductionReport<S> reduction_chain(const BasicFiltration<S>& f, const Weight<S>& w, AtomIndex i0,
                                   const LeafFunction<S>* g) {
  if (i0 >= f.atom_count()) throw Error(ErrorKind::UnknownAtom, "atom index out of range");
  const auto nu = Measure<S>::reference(f);
  const TreeFunction<S> au = averages(f, w.u(), nu);
  const TreeFunction<S> aw = averages(f, w.w(), nu);
  const auto& wm = w.w_measure();

  ReductionReport<S> rep;
  rep.root = i0;
  rep.a2 = a2_characteristic(f, w).value;

  std::optional<TreeFunction<S>> agw;
  if (g) {
    LeafFunction<S> gw(f.leaf_count());
    for (std::size_t l = 0; l < gw.size(); ++l) gw[l] = (*g)[l] * w.w()[l];
    agw = averages(f, gw, nu);
    rep.rho_sum = S(0);
  }

  for (AtomIndex i = i0; i < f.atom(i0).subtree_end; ++i) {
    const auto& a = f.atom(i);
    ReductionAtom<S> ra;
    ra.atom = i;
    ra.h.assign(f.leaf_count(), S(0));
    S gamma_sum(0), gamma_alt_sum(0), rho_sum(0);
    if (a.splits()) {
      for (AtomIndex c : a.children) {
        const auto& b = f.atom(c);
        const S du = au[c] - au[i];
        const S dw = aw[c] - aw[i];
        for (std::size_t l = b.leaf_begin; l < b.leaf_end; ++l) ra.h[l] = du;
        gamma_sum += du * aw[c] * b.measure;
        gamma_alt_sum += du * dw * b.measure;
        rho_sum += abs_value(du) * abs_value(dw) * b.measure;
        rep.square_sum += du * du * aw[c] * b.measure;
      }
    }
    ra.gamma = gamma_sum / (aw[i] * a.measure);
    ra.gamma_alt = gamma_alt_sum / (aw[i] * a.measure);
    ra.rho = rho_sum / a.measure;
    ra.hw = ra.h;
    S orth(0);
    for (std::size_t l = a.leaf_begin; l < a.leaf_end; ++l) {
      ra.hw[l] -= ra.gamma;
      orth += ra.hw[l] * wm.leaf[l];
    }
    ra.orthogonality = orth / a.measure;
    ra.h_norm2 = norm_squared(ra.h, wm);
    ra.hw_norm2 = norm_squared(ra.hw, wm);
    ra.pythagoras_residual = ra.h_norm2 - ra.hw_norm2 - ra.gamma * ra.gamma * wm.atom[i];

    rep.sum_h_norm2 += ra.h_norm2;
    rep.max_orthogonality = std::max(rep.max_orthogonality, abs_value(ra.orthogonality));
    rep.max_pythagoras = std::max(rep.max_pythagoras, abs_value(ra.pythagoras_residual));
    rep.max_gamma_mismatch = std::max(rep.max_gamma_mismatch, abs_value(S(ra.gamma - ra.gamma_alt)));
    if (!less_or_close(ra.hw_norm2, ra.h_norm2)) rep.hw_below_h = false;
    if (agw) *rep.rho_sum += abs_value((*agw)[i]) / aw[i] * ra.rho * a.measure;
    rep.atoms.push_back(std::move(ra));
  }

  const S mass0 = f.measure(i0);
  rep.square_normalizer = rep.a2 * rep.a2 * au[i0] * mass0;
  rep.square_ratio = to_double(rep.square_sum) / to_double(rep.square_normalizer);
  if (g) {
    LeafFunction<S> g2w(f.leaf_count());
    for (std::size_t l = 0; l < g2w.size(); ++l) g2w[l] = (*g)[l] * (*g)[l] * w.w()[l];
    const S avg_g2w = average(f, g2w, i0, nu);
    rep.rho_normalizer = to_double(rep.a2) * std::sqrt(to_double(au[i0])) * std::sqrt(to_double(abs_value(avg_g2w))) *
                         to_double(mass0);
    rep.rho_ratio = rep.rho_normalizer > 0 ? to_double(*rep.rho_sum) / rep.rho_normalizer : 0.0;
  }
  return rep;
}

std::string to_string(ScanMode mode) {
  switch (mode) {
    case ScanMode::Exhaustive01: return "exhaustive-01";
    case ScanMode::ExhaustivePM: return "exhaustive-pm";
    case ScanMode::RandomContinuous: return "random-continuous";
    case ScanMode::Generation: return "generation";
  }
  return "unknown";
}

ScanMode parse_scan_mode(const std::string& name) {
  for (ScanMode m : {ScanMode::Exhaustive01, ScanMode::ExhaustivePM, ScanMode::RandomContinuous, ScanMode::Generation})
    if (to_string(m) == name) return m;
  throw Error(ErrorKind::InvalidArgument, "unknown scan mode '" + name + "'");
}

namespace {

// Norms of sum_I sigma_I Delta_I on L^2(w) for many symbols, using the
// difference matrices conjugated into the unweighted picture once.
class SymbolNorms {
 public:
  SymbolNorms(const Filtration& f, const Weight<double>& w) : f_(f) {
    const auto nu = Measure<double>::reference(f);
    const auto mass = masses(w.w_measure());
    const auto n = static_cast<Eigen::Index>(mass.size());
    Eigen::VectorXd s(n), s_inv(n);
    for (Eigen::Index l = 0; l < n; ++l) {
      s(l) = std::sqrt(mass[l]);
      s_inv(l) = 1.0 / s(l);
    }
    for (AtomIndex i = 0; i < f.atom_count(); ++i) {
      if (!f.atom(i).splits()) continue;
      splitting_.push_back(i);
      blocks_.push_back(s.asDiagonal() * difference_matrix(f, nu, i) * s_inv.asDiagonal());
    }
  }

  const std::vector<AtomIndex>& splitting() const { return splitting_; }

  // coefficients indexed like splitting()
  double norm(const std::vector<double>& coef) const {
    if (blocks_.empty()) return 0.0;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(blocks_[0].rows(), blocks_[0].cols());
    for (std::size_t k = 0; k < blocks_.size(); ++k)
      if (coef[k] != 0.0) b += coef[k] * blocks_[k];
    return std::sqrt(std::max(0.0, largest_eigenvalue(b.transpose() * b)));
  }

  std::vector<double> full_symbol(const std::vector<double>& coef) const {
    std::vector<double> out(f_.atom_count(), 0.0);
    for (std::size_t k = 0; k < splitting_.size(); ++k) out[splitting_[k]] = coef[k];
    return out;
  }

 private:
  const Filtration& f_;
  std::vector<AtomIndex> splitting_;
  std::vector<Eigen::MatrixXd> blocks_;
};

std::uint64_t pattern_count(std::size_t base, std::size_t digits) {
  std::uint64_t n = 1;
  for (std::size_t k = 0; k < digits; ++k) {
    if (n > (std::uint64_t(1) << 62) / base) return std::uint64_t(-1);
    n *= base;
  }
  return n;
}

struct Best {
  double value = -1;
  std::vector<double> coef;
  void offer(double v, const std::vector<double>& c) {
    if (v > value) {
      value = v;
      coef = c;
    }
  }
};

// Coordinate ascent over the vertices of the cube; the norm is convex in
// each coefficient, so each coordinate moves to an endpoint.
void polish(const SymbolNorms& sn, std::vector<double>& coef, double& value, std::uint64_t& evaluated) {
  bool improved = true;
  for (int sweep = 0; improved && sweep < 100; ++sweep) {
    improved = false;
    for (std::size_t k = 0; k < coef.size(); ++k) {
      for (double v : {-1.0, 1.0}) {
        if (coef[k] == v) continue;
        const double old = coef[k];
        coef[k] = v;
        const double nv = sn.norm(coef);
        ++evaluated;
        if (nv > value * (1 + 1e-12)) {
          value = nv;
          improved = true;
        } else {
          coef[k] = old;
        }
      }
    }
  }
}

}  // namespace

ScanReport multiplier_norm_scan(const Filtration& f, const Weight<double>& w, ScanMode mode, std::uint64_t budget,
                                std::uint64_t seed) {
  if (budget < 1) throw Error(ErrorKind::BudgetExceeded, "budget must be at least 1");
  SymbolNorms sn(f, w);
  const std::size_t k = sn.splitting().size();
  ScanReport rep;
  rep.mode = mode;
  rep.seed = seed;
  rep.a2 = a2_characteristic(f, w).value;
  Best best;

  auto enumerate = [&](const std::vector<double>& digits, std::size_t positions,
                       const std::function<std::vector<double>(const std::vector<double>&)>& expand) {
    const std::uint64_t count = pattern_count(digits.size(), positions);
    if (count > budget)
      throw Error(ErrorKind::BudgetExceeded, std::to_string(count) + " patterns exceed the budget of " + std::to_string(budget));
    std::vector<double> pat(positions, digits[0]);
    std::vector<std::size_t> idx(positions, 0);
    for (std::uint64_t p = 0; p < count; ++p) {
      const auto coef = expand(pat);
      best.offer(sn.norm(coef), coef);
      ++rep.evaluated;
      for (std::size_t d = 0; d < positions; ++d) {
        if (++idx[d] < digits.size()) {
          pat[d] = digits[idx[d]];
          break;
        }
        idx[d] = 0;
        pat[d] = digits[0];
      }
    }
  };
  auto identity = [](const std::vector<double>& c) { return c; };

  switch (mode) {
    case ScanMode::Exhaustive01:
    case ScanMode::ExhaustivePM: {
      if (f.atom_count() > kExhaustiveAtomLimit)
        throw Error(ErrorKind::BudgetExceeded, "exhaustive scans need at most 20 atoms");
      const std::vector<double> digits = mode == ScanMode::Exhaustive01 ? std::vector<double>{0.0, 1.0}
                                                                         : std::vector<double>{-1.0, 1.0};
      enumerate(digits, k, identity);
      break;
    }
    case ScanMode::Generation: {
      std::vector<int> gens;
      for (AtomIndex i : sn.splitting()) gens.push_back(f.atom(i).generation);
      std::sort(gens.begin(), gens.end());
      gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
      std::vector<std::size_t> level(k);
      for (std::size_t j = 0; j < k; ++j)
        level[j] = static_cast<std::size_t>(
            std::lower_bound(gens.begin(), gens.end(), f.atom(sn.splitting()[j]).generation) - gens.begin());
      enumerate({-1.0, 0.0, 1.0}, gens.size(), [&](const std::vector<double>& alpha) {
        std::vector<double> coef(k);
        for (std::size_t j = 0; j < k; ++j) coef[j] = alpha[level[j]];
        return coef;
      });
      break;
    }
    case ScanMode::RandomContinuous: {
      Rng rng(seed);
      struct Draw {
        double value;
        std::vector<double> coef;
      };
      std::vector<Draw> top;
      constexpr std::size_t kKeep = 4;
      for (std::uint64_t d = 0; d < budget; ++d) {
        std::vector<double> coef(k);
        for (double& c : coef) c = rng.uniform(-1.0, 1.0);
        const double v = sn.norm(coef);
        ++rep.evaluated;
        best.offer(v, coef);
        top.push_back({v, coef});
        std::stable_sort(top.begin(), top.end(), [](const Draw& a, const Draw& b) { return a.value > b.value; });
        if (top.size() > kKeep) top.pop_back();
      }
      for (auto& t : top) {
        polish(sn, t.coef, t.value, rep.evaluated);
        best.offer(t.value, t.coef);
      }
      break;
    }
  }
  rep.max_norm = std::max(best.value, 0.0);
  rep.argmax_sigma = sn.full_symbol(best.coef.empty() ? std::vector<double>(k, 0.0) : best.coef);
  rep.ratio = rep.max_norm / rep.a2;
  return rep;
}

ConstantEstimates unconditional_constants(const Filtration& f, const Weight<double>& w, std::uint64_t draws,
                                          std::uint64_t seed) {
  ConstantEstimates c;
  const std::uint64_t big = std::uint64_t(1) << 40;
  c.c3 = multiplier_norm_scan(f, w, ScanMode::Exhaustive01, big, seed).max_norm;
  c.c4_exact = multiplier_norm_scan(f, w, ScanMode::ExhaustivePM, big, seed).max_norm;
  c.c4_sampled = multiplier_norm_scan(f, w, ScanMode::RandomContinuous, draws, seed).max_norm;
  return c;
}

template <Scalar S>
S dual_form_residual(const BasicFiltration<S>& f, const Weight<S>& w, const LeafFunction<S>& g) {
  check_leaf_function(f, g);
  LeafFunction<S> gw(g.size());
  for (std::size_t l = 0; l < g.size(); ++l) gw[l] = g[l] * w.w()[l];
  return norm_squared(gw, w.u_measure()) - norm_squared(g, w.w_measure());
}

#define HAARLAB_INSTANTIATE(S)                                                                                   \
  template S average(const BasicFiltration<S>&, const LeafFunction<S>&, AtomIndex, const Measure<S>&);           \
  template TreeFunction<S> averages(const BasicFiltration<S>&, const LeafFunction<S>&, const Measure<S>&);       \
  template LeafFunction<S> martingale_difference(const BasicFiltration<S>&, const LeafFunction<S>&, AtomIndex,   \
                                                 const Measure<S>&);                                             \
  template LeafFunction<S> apply_multiplier(const BasicFiltration<S>&, const MultiplierSymbol<S>&,               \
                                            const LeafFunction<S>&, std::optional<AtomIndex>);                   \
  template A2Result<S> a2_characteristic(const BasicFiltration<S>&, const Weight<S>&);                           \
  template S norm_squared(const LeafFunction<S>&, const Measure<S>&);                                            \
  template ReductionReport<S> reduction_chain(const BasicFiltration<S>&, const Weight<S>&, AtomIndex,            \
                                              const LeafFunction<S>*);                                           \
  template S dual_form_residual(const BasicFiltration<S>&, const Weight<S>&, const LeafFunction<S>&);

HAARLAB_INSTANTIATE(double)
HAARLAB_INSTANTIATE(Rational)

}  // namespace haarlab
