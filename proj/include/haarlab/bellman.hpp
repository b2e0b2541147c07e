#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "haarlab/functions.hpp"

namespace haarlab {

// B1(x,y) = 4 Q^{1/2} (xy)^{1/2} - xy
// B2(x,y) = 128 Q^{3/2} (xy)^{1/2} - (xy)^2
enum class BellmanKind { B1, B2 };

std::string to_string(BellmanKind kind);

struct BellmanPoint {
  double x = 0;
  double y = 0;
};

double bellman_eval(BellmanKind kind, double q, BellmanPoint p);
BellmanPoint bellman_gradient(BellmanKind kind, double q, BellmanPoint p);

// B(X0) - B(X) + grad B(X0) . (X - X0), evaluated in closed form from X0 and the
// displacement, without cancellation between the two values of B.
double tangent_remainder(BellmanKind kind, double q, BellmanPoint x0, BellmanPoint dx);

inline double tangent_remainder_at(BellmanKind kind, double q, BellmanPoint x0, BellmanPoint x) {
  return tangent_remainder(kind, q, x0, {x.x - x0.x, x.y - x0.y});
}

// Tangent remainder of the concave part (xy)^{1/2}; always >= 0.
double sqrt_tangent_remainder(BellmanPoint x0, BellmanPoint dx);

// remainder / |dx dy| for B1; remainder / (y y0 dx^2 + x x0 dy^2) for B2.
double bellman_ratio(BellmanKind kind, double q, BellmanPoint x0, BellmanPoint dx);

// Case regions of the certification. B1 uses SameSign and OppositeSign;
// B2 splits the opposite-sign pairs into Bounded (x(t)y(t) <= 4Q along the
// segment), Hard (a coordinate grows by >= 3x its base while the other drops
// by >= half) and Other, which the case analysis leaves empty.
enum class BellmanRegion { SameSign, OppositeSign, Bounded, Hard, Other };

std::string to_string(BellmanRegion region);

BellmanRegion classify(BellmanKind kind, double q, BellmanPoint x0, BellmanPoint dx);

// max over t in [0,1] of (x0 + t dx)(y0 + t dy)
double segment_product_max(BellmanPoint x0, BellmanPoint dx);

struct SamplerConfig {
  std::uint64_t samples_per_region = 1000000;
  bool boundary_grid = true;
  std::uint64_t skip = 0;  // offset into the low-discrepancy sequence
};

struct Certificate {
  BellmanKind kind = BellmanKind::B1;
  double q = 1;
  BellmanRegion region = BellmanRegion::SameSign;
  std::uint64_t n_samples = 0;
  double min_ratio = 0;
  BellmanPoint witness_x0, witness_x;
  double c_floor = 0;
  bool pass = false;
};

// Assertion levels fixed by the grid oracle.
double bellman_floor(BellmanKind kind, BellmanRegion region);

// Sampled certificates for the tangent-remainder lower bounds, one per region.
std::vector<Certificate> certify_lemma_bell1(double q, const SamplerConfig& cfg = {});
std::vector<Certificate> certify_lemma_bell2(double q, const SamplerConfig& cfg = {});

struct TelescopingReport {
  BellmanKind kind = BellmanKind::B1;
  double q = 0;                      // [w]_{A2}
  Rational identity_residual;        // per-atom identity, rationalized values of B
  double identity_residual_float = 0;
  double sum_gains = 0;              // sum over D(I0) of |I| sum_k theta_k (B_{X_I}(X_I) - B_{X_I}(X_k))
  double boundary = 0;               // |I0| B(X_{I0})
  double range_bound = 0;            // 4Q|I0| or 128Q^2|I0|
  double carleson_sum = 0;           // sum over D(I0) of rho_I |I| (B1) or tau_I |I| (B2)
  double carleson_bound = 0;         // boundary / c
  double c_floor = 0;
  bool holds = false;
};

// X_I = (<u>_I, <w>_I). Uses the smallest certified floor of the kind as c.
TelescopingReport telescoping_check(const Filtration& f, const Weight<double>& w, BellmanKind kind, AtomIndex i0);

// The same report for every atom as I0, indexed by atom.
std::vector<TelescopingReport> telescoping_checks(const Filtration& f, const Weight<double>& w, BellmanKind kind);

}  // namespace haarlab
