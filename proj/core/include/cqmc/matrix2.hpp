#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace cqmc {

/// Real 2x2 matrix, row-major.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  constexpr double trace() const { return a11 + a22; }
  constexpr double det() const { return a11 * a22 - a12 * a21; }

  friend constexpr Mat2 operator*(const Mat2& l, const Mat2& r) {
    return {l.a11 * r.a11 + l.a12 * r.a21, l.a11 * r.a12 + l.a12 * r.a22,
            l.a21 * r.a11 + l.a22 * r.a21, l.a21 * r.a12 + l.a22 * r.a22};
  }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

using Vec2 = std::array<double, 2>;

constexpr Vec2 operator*(const Mat2& m, const Vec2& v) {
  return {m.a11 * v[0] + m.a12 * v[1], m.a21 * v[0] + m.a22 * v[1]};
}

inline double max_abs_diff(const Mat2& a, const Mat2& b) {
  return std::max({std::abs(a.a11 - b.a11), std::abs(a.a12 - b.a12), std::abs(a.a21 - b.a21),
                   std::abs(a.a22 - b.a22)});
}

}  // namespace cqmc
