#pragma once

// Generated by grid_oracle (200^4 grid, Q in {1, 4, 100}).
// Grid minima: B1 same-sign 0.999999999781, B1 opposite-sign 1,
// B2 same-sign 2.73206807042, B2 bounded 17.5601604653, B2 hard 31; B2 other pairs 0.

namespace haarlab::floors {

inline constexpr double kBell1SameSign = 0.99999999900000003;
inline constexpr double kBell1OppositeSign = 0.99999999900000003;
inline constexpr double kBell2SameSign = 1.3660340352102114;
inline constexpr double kBell2Bounded = 8.7800802326537877;
inline constexpr double kBell2Hard = 15.499999999999991;

}  // namespace haarlab::floors
