#include "casimir/moore.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "casimir/errors.hpp"
#include "casimir/parallel.hpp"

namespace casimir {

SigmaSolution::SigmaSolution(TimeAdvanceMap map, double sigma, double t_bar, long pullback_limit)
    : map_(std::move(map)), sigma_(sigma), t_bar_(t_bar), pullback_limit_(pullback_limit) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("SigmaSolution: sigma must lie in (0, 1)");
  if (!(t_bar <= -0.5 * alpha())) throw std::invalid_argument("SigmaSolution: seed point must satisfy t_bar <= -alpha/2");
  if (pullback_limit < 1) throw std::invalid_argument("SigmaSolution: pullback_limit must be positive");
}

SigmaSolution::Pullback SigmaSolution::pullback(double t) const {
  const double hi = t_bar_ + alpha();
  double s = t;
  long n = 0;
  while (s >= hi) {
    if (++n > pullback_limit_) throw PullbackOverflow(t, pullback_limit_);
    s = map_.inverse_advance(s);
  }
  // Below the seed the motion is static, so F is a shift by α.
  while (s < t_bar_) {
    if (--n < -pullback_limit_) throw PullbackOverflow(t, pullback_limit_);
    s = map_.advance(s);
  }
  return {s, n};
}

double SigmaSolution::value(double t) const {
  const Pullback pb = pullback(t);
  return seed_slope() * pb.seed_point + static_cast<double>(pb.n) * sigma_;
}

Jet SigmaSolution::jet(double t) const {
  const double hi = t_bar_ + alpha();
  Jet chain = Jet::identity(t);  // jet of F^{-n} at t
  long n = 0;
  while (chain.value >= hi) {
    if (++n > pullback_limit_) throw PullbackOverflow(t, pullback_limit_);
    chain = compose(map_.inverse_jet(chain.value), chain);
  }
  while (chain.value < t_bar_) {
    if (--n < -pullback_limit_) throw PullbackOverflow(t, pullback_limit_);
    chain = compose(map_.advance_jet(chain.value), chain);
  }
  return scale(chain, seed_slope(), static_cast<double>(n) * sigma_);
}

double SigmaSolution::eval(double t, int order) const {
  if (order < 0 || order > 3) throw std::invalid_argument("sigma_eval: order must be 0..3");
  return order == 0 ? value(t) : jet(t)[order];
}

SigmaSolution build_sigma(const MirrorTrajectory& traj, double seed_t_bar, const SigmaOptions& options) {
  const TrajectoryParams& params = traj.params();
  if (params.family != TrajectoryFamily::SmoothedStart && params.beta != 0.0) {
    throw std::invalid_argument("build_sigma: the mirror must be at rest for t <= 0 (use the smoothed-start family)");
  }
  TimeAdvanceMap map(traj, options.solver);
  double sigma = params.alpha;
  if (params.beta != 0.0) {
    const TimeAdvanceMap periodic(traj.periodic_counterpart(), options.solver);
    sigma = rotation_number(periodic, 0.0, options.rotation_iters).value;
  }
  if (std::isnan(seed_t_bar)) seed_t_bar = -params.alpha;
  return SigmaSolution(std::move(map), sigma, seed_t_bar, options.pullback_limit);
}

SigmaSolution build_sigma(const MirrorTrajectory& traj, const SigmaOptions& options) {
  return build_sigma(traj, std::numeric_limits<double>::quiet_NaN(), options);
}

double sigma_eval(const SigmaSolution& s, double t, int order) { return s.eval(t, order); }

SigmaSnapshot sigma_snapshot(const SigmaSolution& s, int n, int n_grid, const PeriodicOrbit& repelling, int shift,
                             unsigned threads) {
  if (n < 0) throw std::invalid_argument("sigma_snapshot: n must be non-negative");
  if (n_grid < 2) throw std::invalid_argument("sigma_snapshot: n_grid must be at least 2");
  if (repelling.points.empty()) throw std::invalid_argument("sigma_snapshot: empty orbit");
  SigmaSnapshot out;
  out.n = n;
  out.p = repelling.p;
  const double p = static_cast<double>(repelling.p);
  out.t_start = repelling.points.front() + shift * p;
  const double offset = n * p;
  out.grid.resize(n_grid);
  out.values.resize(n_grid);
  parallel_for(static_cast<std::size_t>(n_grid), threads, [&](std::size_t i) {
    const double t = out.t_start + p * static_cast<double>(i) / n_grid;
    out.grid[i] = t;
    out.values[i] = s.value(t + offset) - offset;
  });
  out.endpoint_residual = s.value(out.t_start + offset) - offset - s.value(out.t_start);
  return out;
}

std::complex<double> mode_function(const SigmaSolution& s, int k, double t, double x) {
  if (k < 1) throw std::invalid_argument("mode_function: k must be positive");
  const double a = s.map().trajectory().position(t);
  if (!(x >= 0.0 && x <= a)) {
    throw DomainError("mode_function: x=" + std::to_string(x) + " outside [0, a(t)=" + std::to_string(a) + "]");
  }
  const double sm = s.value(t - x);
  const double sp = s.value(t + x);
  // Reduce the phases modulo 2π through the fractional part of kΣ/σ.
  auto phase = [&](double sig) {
    const double turns = k * sig / s.sigma();
    return 2.0 * std::numbers::pi * (turns - std::floor(turns));
  };
  return std::polar(1.0, -phase(sm)) - std::polar(1.0, -phase(sp));
}

}  // namespace casimir
