#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "casimir/errors.hpp"

namespace casimir::roots {

struct NewtonResult {
  double root = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Newton iteration inside a known sign bracket: f(lo) < 0 < f(hi) when
/// `increasing`, reversed otherwise. Iterates that leave the bracket are
/// replaced by bisection. Stops when |f| <= tol or the bracket collapses to a
/// few ulps, returning the best iterate seen.
template <class FDf>
NewtonResult newton_in_bracket(FDf&& f_df, double lo, double hi, bool increasing, double tol,
                               int max_iter, double x0 = std::numeric_limits<double>::quiet_NaN()) {
  double x = std::isnan(x0) ? 0.5 * (lo + hi) : x0;
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  double best = x;
  double best_res = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iter; ++it) {
    auto [fx, dfx] = f_df(x);
    if (std::abs(fx) < best_res) {
      best = x;
      best_res = std::abs(fx);
    }
    if (std::abs(fx) <= tol) return {x, fx, it};
    if ((fx > 0) == increasing) {
      hi = x;
    } else {
      lo = x;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
      return {best, best_res, it};
    }
    double next = x - fx / dfx;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (next == x) return {best, best_res, it};
    x = next;
  }
  throw ConvergenceFailure("newton: no convergence after " + std::to_string(max_iter) +
                           " iterations (residual " + std::to_string(best_res) + ")");
}

/// As newton_in_bracket, but checks the bracket first and infers the sign
/// orientation from the endpoint values.
template <class FDf>
NewtonResult bracketed_newton(FDf&& f_df, double lo, double hi, double tol, int max_iter,
                              double x0 = std::numeric_limits<double>::quiet_NaN()) {
  const double flo = f_df(lo).first;
  if (std::abs(flo) <= tol) return {lo, flo, 0};
  const double fhi = f_df(hi).first;
  if (std::abs(fhi) <= tol) return {hi, fhi, 0};
  if ((flo > 0) == (fhi > 0)) {
    throw ConvergenceFailure("newton: root not bracketed on [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
  }
  return newton_in_bracket(f_df, lo, hi, fhi > 0, tol, max_iter, x0);
}

/// Golden-section search for a local minimum of `f` on [lo, hi].
template <class F>
std::pair<double, double> golden_minimize(F&& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace casimir::roots
