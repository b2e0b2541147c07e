#include "haarlab/bellman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/random/sobol.hpp>

#include "haarlab/bellman_floors.hpp"
#include "haarlab/carleson.hpp"
#include "haarlab/marttools.hpp"

namespace haarlab {

std::string to_string(BellmanKind kind) { return kind == BellmanKind::B1 ? "B1" : "B2"; }

std::string to_string(BellmanRegion region) {
  switch (region) {
    case BellmanRegion::SameSign: return "same-sign";
    case BellmanRegion::OppositeSign: return "opposite-sign";
    case BellmanRegion::Bounded: return "opposite-bounded";
    case BellmanRegion::Hard: return "hard";
    case BellmanRegion::Other: return "other";
  }
  return "unknown";
}

namespace {

void check_domain(BellmanPoint p) {
  if (!(p.x > 0) || !(p.y > 0)) throw Error(ErrorKind::DomainError, "Bellman points need x > 0 and y > 0");
}

void check_q(double q) {
  if (!(q >= 1) || !std::isfinite(q)) throw Error(ErrorKind::DomainError, "Q must be at least 1");
}

}  // namespace

double bellman_eval(BellmanKind kind, double q, BellmanPoint p) {
  check_domain(p);
  const double xy = p.x * p.y;
  if (kind == BellmanKind::B1) return 4 * std::sqrt(q) * std::sqrt(xy) - xy;
  return 128 * q * std::sqrt(q) * std::sqrt(xy) - xy * xy;
}

BellmanPoint bellman_gradient(BellmanKind kind, double q, BellmanPoint p) {
  check_domain(p);
  const double xy = p.x * p.y;
  // B = c (xy)^{1/2} - (xy)^k, so grad B = (c/(2 sqrt(xy)) - k (xy)^{k-1}) (y, x)
  const double d = kind == BellmanKind::B1 ? 2 * std::sqrt(q) / std::sqrt(xy) - 1
                                           : 64 * q * std::sqrt(q) / std::sqrt(xy) - 2 * xy;
  return {d * p.y, d * p.x};
}

double sqrt_tangent_remainder(BellmanPoint x0, BellmanPoint dx) {
  check_domain(x0);
  const BellmanPoint x{x0.x + dx.x, x0.y + dx.y};
  check_domain(x);
  const double r = std::sqrt(x0.y / x0.x);
  const double a = std::sqrt(x.x) * std::sqrt(r);
  const double b = std::sqrt(x.y) / std::sqrt(r);
  const double diff = (dx.x * r - dx.y / r) / (a + b);
  return 0.5 * diff * diff;
}

double tangent_remainder(BellmanKind kind, double q, BellmanPoint x0, BellmanPoint dx) {
  const double r1 = sqrt_tangent_remainder(x0, dx);
  const double cross = dx.x * dx.y;
  if (kind == BellmanKind::B1) return 4 * std::sqrt(q) * r1 + cross;
  const double p0 = x0.x * x0.y;
  const double dp = x0.y * dx.x + x0.x * dx.y + cross;
  return 128 * q * std::sqrt(q) * r1 + dp * dp + 2 * p0 * cross;
}

double bellman_ratio(BellmanKind kind, double q, BellmanPoint x0, BellmanPoint dx) {
  const double rem = tangent_remainder(kind, q, x0, dx);
  if (kind == BellmanKind::B1) return rem / std::abs(dx.x * dx.y);
  const double x = x0.x + dx.x, y = x0.y + dx.y;
  return rem / (y * x0.y * dx.x * dx.x + x * x0.x * dx.y * dx.y);
}

double segment_product_max(BellmanPoint x0, BellmanPoint dx) {
  double top = std::max(x0.x * x0.y, (x0.x + dx.x) * (x0.y + dx.y));
  if (dx.x * dx.y < 0) {
    const double t = -(x0.x * dx.y + x0.y * dx.x) / (2 * dx.x * dx.y);
    if (t > 0 && t < 1) top = std::max(top, (x0.x + t * dx.x) * (x0.y + t * dx.y));
  }
  return top;
}

BellmanRegion classify(BellmanKind kind, double q, BellmanPoint x0, BellmanPoint dx) {
  if (dx.x * dx.y >= 0) return BellmanRegion::SameSign;
  if (kind == BellmanKind::B1) return BellmanRegion::OppositeSign;
  const bool hard = (dx.x >= 3 * x0.x && -dx.y >= x0.y / 2) || (dx.y >= 3 * x0.y && -dx.x >= x0.x / 2);
  if (hard) return BellmanRegion::Hard;
  if (segment_product_max(x0, dx) <= 4 * q * (1 + 1e-12)) return BellmanRegion::Bounded;
  return BellmanRegion::Other;
}

double bellman_floor(BellmanKind kind, BellmanRegion region) {
  if (kind == BellmanKind::B1) {
    switch (region) {
      case BellmanRegion::SameSign: return floors::kBell1SameSign;
      case BellmanRegion::OppositeSign: return floors::kBell1OppositeSign;
      default: break;
    }
  } else {
    switch (region) {
      case BellmanRegion::SameSign: return floors::kBell2SameSign;
      case BellmanRegion::Bounded: return floors::kBell2Bounded;
      case BellmanRegion::Hard: return floors::kBell2Hard;
      default: break;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "no floor for region " + to_string(region) + " of " + to_string(kind));
}

namespace {

constexpr double kSpan = 13.815510557964274;  // ln(1e6)
constexpr double kLn4 = 1.3862943611198906;
constexpr double kLn2 = 0.69314718055994531;

struct Pair {
  BellmanPoint x0, dx;
};

// Which family of pairs a sampler stream draws from.
enum class Draw { SameSign, Opposite, Bounded, Hard };

// Builds a pair from six uniforms. X0 is spread over Omega_Q with log-uniform
// product and log-uniform x; X = (x0 e^a, y0 e^{-b}) stays inside Omega_Q
// because a - b <= ln(Q / x0 y0). Opposite pairs are mirrored across x = y
// half of the time.
Pair make_pair(Draw draw, double q, const double* u) {
  const double p0 = q * std::exp(-kSpan * u[0]);
  const double x0 = std::exp(0.5 * kSpan * (2 * u[1] - 1));
  const double y0 = p0 / x0;
  const double room = std::log(q / p0);
  double a = 0, b = 0;
  switch (draw) {
    case Draw::SameSign:
      if (u[4] < 0.5) {
        a = room * u[2];
        b = -(room - a) * u[3];
      } else {
        a = -kSpan * u[2];
        b = kSpan * u[3];
      }
      break;
    case Draw::Opposite:
      a = kSpan * u[2];
      b = std::max(0.0, a - room) + kSpan * u[3];
      break;
    case Draw::Hard:
      a = kLn4 + kSpan * u[2];
      b = std::max(kLn2, a - room) + kSpan * u[3];
      break;
    case Draw::Bounded:
      if (u[5] < 0.5) {
        a = kLn4 * u[2];
        b = std::max(0.0, a - room) + kSpan * u[3];
      } else {
        b = kLn2 * u[3];
        a = (b + room) * u[2];
      }
      break;
  }
  Pair pr{{x0, y0}, {x0 * std::expm1(a), y0 * std::expm1(-b)}};
  if (draw != Draw::SameSign && u[4] < 0.5) {
    std::swap(pr.x0.x, pr.x0.y);
    std::swap(pr.dx.x, pr.dx.y);
  }
  return pr;
}

// Deterministic pairs with both products on {Q, Q/2, 1e-6 Q}.
std::vector<Pair> boundary_pairs(double q) {
  constexpr int kSteps = 25;
  std::vector<BellmanPoint> pts;
  for (double p : {q, q / 2, q * 1e-6})
    for (int i = 0; i < kSteps; ++i) {
      const double x = std::exp(0.5 * kSpan * (2.0 * i / (kSteps - 1) - 1)) * std::sqrt(p);
      pts.push_back({x, p / x});
    }
  std::vector<Pair> out;
  for (const auto& a : pts)
    for (const auto& b : pts) out.push_back({a, {b.x - a.x, b.y - a.y}});
  return out;
}

bool degenerate(const Pair& p) { return std::hypot(p.dx.x, p.dx.y) < 1e-8; }

struct Tally {
  std::uint64_t n = 0;
  double min_ratio = std::numeric_limits<double>::infinity();
  Pair witness{};

  void add(double ratio, const Pair& p) {
    ++n;
    if (ratio < min_ratio) {
      min_ratio = ratio;
      witness = p;
    }
  }
};

std::vector<Certificate> certify(BellmanKind kind, double q, const SamplerConfig& cfg) {
  check_q(q);
  if (cfg.samples_per_region == 0 && !cfg.boundary_grid)
    throw Error(ErrorKind::SamplerEmpty, "sampler configured with no samples");
  std::vector<BellmanRegion> regions;
  std::vector<Draw> draws;
  if (kind == BellmanKind::B1) {
    regions = {BellmanRegion::SameSign, BellmanRegion::OppositeSign};
    draws = {Draw::SameSign, Draw::Opposite};
  } else {
    regions = {BellmanRegion::SameSign, BellmanRegion::Bounded, BellmanRegion::Hard, BellmanRegion::Other};
    draws = {Draw::SameSign, Draw::Bounded, Draw::Hard};
  }
  std::vector<Tally> tally(regions.size());
  auto slot = [&](BellmanRegion r) {
    return static_cast<std::size_t>(std::find(regions.begin(), regions.end(), r) - regions.begin());
  };
  auto record = [&](const Pair& p) {
    if (degenerate(p)) return;
    const BellmanPoint x{p.x0.x + p.dx.x, p.x0.y + p.dx.y};
    if (!(x.x > 0 && x.y > 0) || x.x * x.y > q * (1 + 1e-12) || p.x0.x * p.x0.y > q * (1 + 1e-12)) return;
    const BellmanRegion r = classify(kind, q, p.x0, p.dx);
    const std::size_t k = slot(r);
    if (r == BellmanRegion::Other) {
      tally[k].add(bellman_ratio(kind, q, p.x0, p.dx), p);
      return;
    }
    if (kind == BellmanKind::B1 && (p.dx.x == 0 || p.dx.y == 0)) return;
    tally[k].add(bellman_ratio(kind, q, p.x0, p.dx), p);
  };

  for (Draw d : draws) {
    boost::random::sobol gen(6);
    gen.discard(6 * cfg.skip);
    double u[6];
    for (std::uint64_t s = 0; s < cfg.samples_per_region; ++s) {
      for (double& v : u) v = std::ldexp(static_cast<double>(gen()), -64);
      record(make_pair(d, q, u));
    }
  }
  if (cfg.boundary_grid)
    for (const Pair& p : boundary_pairs(q)) record(p);

  std::vector<Certificate> out;
  for (std::size_t k = 0; k < regions.size(); ++k) {
    Certificate c;
    c.kind = kind;
    c.q = q;
    c.region = regions[k];
    c.n_samples = tally[k].n;
    c.witness_x0 = tally[k].witness.x0;
    c.witness_x = {tally[k].witness.x0.x + tally[k].witness.dx.x, tally[k].witness.x0.y + tally[k].witness.dx.y};
    if (regions[k] == BellmanRegion::Other) {
      c.min_ratio = tally[k].n ? tally[k].min_ratio : 0.0;
      c.c_floor = 0;
      c.pass = tally[k].n == 0;
    } else {
      if (tally[k].n == 0) throw Error(ErrorKind::SamplerEmpty, "no samples in region " + to_string(regions[k]));
      c.min_ratio = tally[k].min_ratio;
      c.c_floor = bellman_floor(kind, regions[k]);
      c.pass = c.min_ratio >= c.c_floor && c.min_ratio > 0;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<Certificate> certify_lemma_bell1(double q, const SamplerConfig& cfg) {
  return certify(BellmanKind::B1, q, cfg);
}

std::vector<Certificate> certify_lemma_bell2(double q, const SamplerConfig& cfg) {
  return certify(BellmanKind::B2, q, cfg);
}

namespace {

Rational rational_eval(BellmanKind kind, double q, const Rational& x, const Rational& y) {
  return Rational(bellman_eval(kind, q, {to_double(x), to_double(y)}));
}

}  // namespace

std::vector<TelescopingReport> telescoping_checks(const Filtration& f, const Weight<double>& w, BellmanKind kind) {
  const double q = std::max(1.0, a2_characteristic(f, w).value);
  const ExactFiltration ef = to_exact(f);
  const Weight<Rational> ew(ef, to_exact(w.w()));
  const auto nu = Measure<Rational>::reference(ef);
  const TreeFunction<Rational> xu = averages(ef, ew.u(), nu);
  const TreeFunction<Rational> yw = averages(ef, ew.w(), nu);
  const TreeFunction<double> term = kind == BellmanKind::B1 ? rho_sequence(f, w) : tau_sequence(f, w);
  const double c_floor = kind == BellmanKind::B1
                             ? std::min(floors::kBell1SameSign, floors::kBell1OppositeSign)
                             : std::min({floors::kBell2SameSign, floors::kBell2Bounded, floors::kBell2Hard});

  const std::size_t n = f.atom_count();
  std::vector<Rational> residual(n, Rational(0));
  std::vector<double> residual_float(n, 0.0), gains(n, 0.0);
  for (AtomIndex i = 0; i < n; ++i) {
    const auto& a = f.atom(i);
    if (!a.splits()) continue;
    const BellmanPoint x0{to_double(xu[i]), to_double(yw[i])};
    const Rational b0 = rational_eval(kind, q, xu[i], yw[i]);
    const BellmanPoint g = bellman_gradient(kind, q, x0);
    const Rational gx(g.x), gy(g.y);
    Rational lhs = b0, rhs(0);
    double gain = 0, naive = bellman_eval(kind, q, x0);
    for (AtomIndex c : a.children) {
      const Rational theta = ef.measure(c) / ef.measure(i);
      const Rational bk = rational_eval(kind, q, xu[c], yw[c]);
      lhs -= theta * bk;
      rhs += theta * (b0 - bk + gx * (xu[c] - xu[i]) + gy * (yw[c] - yw[i]));
      const BellmanPoint dx{to_double(Rational(xu[c] - xu[i])), to_double(Rational(yw[c] - yw[i]))};
      const double th = to_double(theta);
      gain += th * tangent_remainder(kind, q, x0, dx);
      naive -= th * bellman_eval(kind, q, {to_double(xu[c]), to_double(yw[c])});
    }
    residual[i] = abs_value(Rational(lhs - rhs));
    const double scale = std::max({std::abs(naive), std::abs(gain), 1e-300 + bellman_eval(kind, q, x0)});
    residual_float[i] = std::abs(naive - gain) / scale;
    gains[i] = gain * a.measure;
  }

  std::vector<TelescopingReport> out(n);
  for (AtomIndex i0 = n; i0-- > 0;) {
    auto& rep = out[i0];
    rep.kind = kind;
    rep.q = q;
    rep.c_floor = c_floor;
    rep.identity_residual = residual[i0];
    rep.identity_residual_float = residual_float[i0];
    rep.sum_gains = gains[i0];
    rep.carleson_sum = term[i0] * f.measure(i0);
    for (AtomIndex c : f.atom(i0).children) {
      const auto& sub = out[c];
      rep.identity_residual += sub.identity_residual;
      rep.identity_residual_float = std::max(rep.identity_residual_float, sub.identity_residual_float);
      rep.sum_gains += sub.sum_gains;
      rep.carleson_sum += sub.carleson_sum;
    }
    const double mass = f.measure(i0);
    rep.boundary = mass * bellman_eval(kind, q, {to_double(xu[i0]), to_double(yw[i0])});
    rep.range_bound = kind == BellmanKind::B1 ? 4 * q * mass : 128 * q * q * mass;
    rep.carleson_bound = rep.boundary / c_floor;
    const double tol = 1e-9;
    rep.holds = rep.identity_residual == 0 && rep.sum_gains <= rep.boundary * (1 + tol) &&
                rep.boundary <= rep.range_bound * (1 + tol) && rep.carleson_sum <= rep.carleson_bound * (1 + tol);
  }
  return out;
}

TelescopingReport telescoping_check(const Filtration& f, const Weight<double>& w, BellmanKind kind, AtomIndex i0) {
  if (i0 >= f.atom_count()) throw Error(ErrorKind::UnknownAtom, "atom index out of range");
  return telescoping_checks(f, w, kind)[i0];
}

}  // namespace haarlab
