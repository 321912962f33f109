#pragma once
// Reference implementations used as test oracles. Deliberately naive:
// closed formulas, plain bisection and finite differences, no code shared
// with the library.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

struct Motion {
  double alpha, beta, gamma;
  bool smoothed = false;

  double operator()(double t) const {
    if (smoothed && t <= 0.0) return alpha / 2.0;
    const double s = std::sin(4.0 * pi * t);
    const double osc = beta / (2.0 * pi) * std::sin(2.0 * pi * t + gamma * s * s);
    return alpha / 2.0 + (smoothed ? (1.0 - std::exp(-t * t * t * t)) : 1.0) * osc;
  }
};

/// Root of f on [lo, hi] by bisection; f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Θ(t): the s with s - a(s) = t.
inline double theta(const Motion& a, double t) {
  return bisect([&](double s) { return s - a(s) - t; }, t - 1.0, t + 1.0);
}

/// F(t) = Θ(t) + a(Θ(t)).
inline double advance(const Motion& a, double t) {
  const double s = theta(a, t);
  return s + a(s);
}

/// F⁻¹(t): the u with u + a(u) = s, then s - a(s) where s solves s + a(s) = t.
inline double inverse_advance(const Motion& a, double t) {
  const double s = bisect([&](double u) { return u + a(u) - t; }, t - 1.0, t + 1.0);
  return s - a(s);
}

/// Central differences, 4th-order accurate.
inline double d1(const std::function<double(double)>& f, double t, double h = 1e-3) {
  return (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12 * h);
}
inline double d2(const std::function<double(double)>& f, double t, double h = 1e-3) {
  return (-f(t + 2 * h) + 16 * f(t + h) - 30 * f(t) + 16 * f(t - h) - f(t - 2 * h)) / (12 * h * h);
}
inline double d3(const std::function<double(double)>& f, double t, double h = 2e-3) {
  return (-f(t + 3 * h) + 8 * f(t + 2 * h) - 13 * f(t + h) + 13 * f(t - h) - 8 * f(t - 2 * h) + f(t - 3 * h)) /
         (8 * h * h * h);
}

/// Rotation number by brute-force iteration of a lift.
inline double brute_rotation(const std::function<double(double)>& lift, double t0, int n) {
  double t = t0;
  for (int i = 0; i < n; ++i) t = lift(t);
  return (t - t0) / n;
}

/// Uniform draw helper.
struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
};

/// Random parameters satisfying the motion constraints: a_min > 0, |a'| < 1,
/// a_max < 1/2.
inline Motion random_motion(Rng& rng, bool smoothed = false) {
  for (;;) {
    const double gamma = rng.uniform(0.0, 0.8);
    const double beta = rng.uniform(0.01, 0.9 / (1.0 + 2.0 * gamma));
    const double alpha = rng.uniform(beta / pi + 0.02, 1.0 - beta / pi - 0.02);
    if (alpha > beta / pi && alpha / 2 + beta / (2 * pi) < 0.5) return {alpha, beta, gamma, smoothed};
  }
}

}  // namespace oracle
