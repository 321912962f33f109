#pragma once

#include <array>
#include <cmath>

namespace casimir {

/// Value and first three derivatives of a scalar function at one point.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;

  [[nodiscard]] double operator[](int order) const {
    switch (order) {
      case 0: return value;
      case 1: return d1;
      case 2: return d2;
      default: return d3;
    }
  }

  static constexpr Jet identity(double t) { return {t, 1.0, 0.0, 0.0}; }
  static constexpr Jet constant(double c) { return {c, 0.0, 0.0, 0.0}; }
};

/// Jet of outer∘inner, where `outer` is the jet of the outer function taken at
/// inner.value (Faà di Bruno to third order).
[[nodiscard]] constexpr Jet compose(const Jet& outer, const Jet& inner) {
  const double h1 = inner.d1;
  return {outer.value,
          outer.d1 * h1,
          outer.d2 * h1 * h1 + outer.d1 * inner.d2,
          outer.d3 * h1 * h1 * h1 + 3.0 * outer.d2 * h1 * inner.d2 + outer.d1 * inner.d3};
}

/// Schwarzian derivative f'''/f' - 3/2 (f''/f')^2.
[[nodiscard]] inline double schwarzian(const Jet& j) {
  const double r2 = j.d2 / j.d1;
  return j.d3 / j.d1 - 1.5 * r2 * r2;
}

/// Affine rescaling c*f + shift; the Schwarzian is unchanged by it.
[[nodiscard]] constexpr Jet scale(const Jet& j, double c, double shift = 0.0) {
  return {c * j.value + shift, c * j.d1, c * j.d2, c * j.d3};
}

}  // namespace casimir
