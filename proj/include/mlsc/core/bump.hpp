#pragma once
#include <cmath>

namespace mlsc::core {

// C^inf monotone step: 0 for s <= 0, 1 for s >= 1.
inline double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

// low-frequency switch: 0 for s <= 1, 1 for s >= 2, smooth in between
inline double smooth_switch(double s) { return smooth_step(s - 1.0); }

// 1 on |x| <= r_flat, 0 beyond r_supp, C^inf plateau bump
inline double plateau_bump(double x, double r_flat, double r_supp) {
  const double a = std::abs(x);
  if (a <= r_flat) return 1.0;
  if (a >= r_supp) return 0.0;
  return 1.0 - smooth_step((a - r_flat) / (r_supp - r_flat));
}

}  // namespace mlsc::core
