#pragma once

#include <algorithm>
#include <cmath>

namespace lpi {

inline constexpr double kDefaultTol = 1e-9;

// Absolute below magnitude 1, relative above.
inline bool near(double a, double b, double tol = kDefaultTol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool near_zero(double a, double tol = kDefaultTol) { return std::abs(a) <= tol; }

}  // namespace lpi
