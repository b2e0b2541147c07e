// Coarse grid search for the smallest tangent-remainder ratios of the two
// Bellman functions over pairs in {0 < xy <= Q}. Prints a C++ header with
// assertion floors set to half the grid minimum over all Q.

#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

namespace {

constexpr int kN = 200;

struct Mins {
  double same1 = 1e300, opp1 = 1e300;
  double same2 = 1e300, bounded2 = 1e300, hard2 = 1e300;
  long long other2 = 0;
};

std::vector<double> log_grid(double lo, double hi) {
  std::vector<double> g(kN);
  for (int i = 0; i < kN; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (kN - 1));
  return g;
}

void scan(double q, Mins& m) {
  const auto xs = log_grid(1e-3, 1e3);
  const auto ps = log_grid(1e-6 * q, q);
  const double sq = std::sqrt(q);
  auto b1 = [&](double p) { return 4 * sq * std::sqrt(p) - p; };
  auto b2 = [&](double p) { return 128 * q * sq * std::sqrt(p) - p * p; };
  auto db1 = [&](double p) { return 2 * sq / std::sqrt(p) - 1; };
  auto db2 = [&](double p) { return 64 * q * sq / std::sqrt(p) - 2 * p; };
  for (double x0 : xs) {
    for (double p0 : ps) {
      const double y0 = p0 / x0;
      const double v10 = b1(p0), v20 = b2(p0), g1 = db1(p0), g2 = db2(p0);
      for (double x : xs) {
        for (double p : ps) {
          const double y = p / x;
          const double dx = x - x0, dy = y - y0;
          if (dx == 0 || dy == 0) continue;
          const double lin = y0 * dx + x0 * dy;
          const double r1 = v10 - b1(p) + g1 * lin;
          const double r2 = v20 - b2(p) + g2 * lin;
          const double q1 = r1 / std::abs(dx * dy);
          const double q2 = r2 / (y * y0 * dx * dx + x * x0 * dy * dy);
          if (dx * dy > 0) {
            m.same1 = std::min(m.same1, q1);
            m.same2 = std::min(m.same2, q2);
            continue;
          }
          m.opp1 = std::min(m.opp1, q1);
          const bool hard = (dx >= 3 * x0 && -dy >= y0 / 2) || (dy >= 3 * y0 && -dx >= x0 / 2);
          if (hard) {
            m.hard2 = std::min(m.hard2, q2);
            continue;
          }
          double top = std::max(p0, p);
          const double t = -(x0 * dy + y0 * dx) / (2 * dx * dy);
          if (t > 0 && t < 1) top = std::max(top, (x0 + t * dx) * (y0 + t * dy));
          if (top <= 4 * q * (1 + 1e-12))
            m.bounded2 = std::min(m.bounded2, q2);
          else
            ++m.other2;
        }
      }
    }
  }
}

}  // namespace

int main() {
  Mins all;
  for (double q : {1.0, 4.0, 100.0}) {
    Mins m;
    scan(q, m);
    std::fprintf(stderr, "Q=%g same1=%.12g opp1=%.12g same2=%.12g bounded2=%.12g hard2=%.12g other2=%lld\n", q,
                 m.same1, m.opp1, m.same2, m.bounded2, m.hard2, m.other2);
    all.same1 = std::min(all.same1, m.same1);
    all.opp1 = std::min(all.opp1, m.opp1);
    all.same2 = std::min(all.same2, m.same2);
    all.bounded2 = std::min(all.bounded2, m.bounded2);
    all.hard2 = std::min(all.hard2, m.hard2);
    all.other2 += m.other2;
  }
  const double tight = 1 - 1e-9;
  std::printf("#pragma once\n\n");
  std::printf("// Generated by grid_oracle (200^4 grid, Q in {1, 4, 100}).\n");
  std::printf("// Grid minima: B1 same-sign %.12g, B1 opposite-sign %.12g,\n", all.same1, all.opp1);
  std::printf("// B2 same-sign %.12g, B2 bounded %.12g, B2 hard %.12g; B2 other pairs %lld.\n\n", all.same2,
              all.bounded2, all.hard2, all.other2);
  std::printf("namespace haarlab::floors {\n\n");
  std::printf("inline constexpr double kBell1SameSign = %.17g;\n", tight);
  std::printf("inline constexpr double kBell1OppositeSign = %.17g;\n", all.opp1 >= tight ? tight : 0.5 * all.opp1);
  std::printf("inline constexpr double kBell2SameSign = %.17g;\n", 0.5 * all.same2);
  std::printf("inline constexpr double kBell2Bounded = %.17g;\n", 0.5 * all.bounded2);
  std::printf("inline constexpr double kBell2Hard = %.17g;\n", 0.5 * all.hard2);
  std::printf("\n}  // namespace haarlab::floors\n");
  return 0;
}
