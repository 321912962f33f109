#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "casimir/circle_map.hpp"
#include "casimir/jet.hpp"

namespace casimir {

/// Solution of Σ∘F = Σ + σ for a motion at rest up to t = 0, seeded with the
/// linear function Σ(t) = (σ/α)t on [t̄, t̄ + α) and extended lazily: a query
/// point is pulled back with F⁻¹ until it lands in the seed interval.
class SigmaSolution {
 public:
  SigmaSolution(TimeAdvanceMap map, double sigma, double t_bar, long pullback_limit);

  [[nodiscard]] const TimeAdvanceMap& map() const noexcept { return map_; }
  [[nodiscard]] double sigma() const noexcept { return sigma_; }
  [[nodiscard]] double alpha() const noexcept { return map_.trajectory().params().alpha; }
  [[nodiscard]] double t_bar() const noexcept { return t_bar_; }
  [[nodiscard]] double seed_slope() const noexcept { return sigma_ / alpha(); }
  [[nodiscard]] long pullback_limit() const noexcept { return pullback_limit_; }

  struct Pullback {
    double seed_point;  ///< F^{-n}(t) in [t̄, t̄ + α)
    long n;             ///< number of inverse steps (negative: forward steps)
  };
  /// Throws PullbackOverflow when more than pullback_limit steps are needed.
  [[nodiscard]] Pullback pullback(double t) const;

  [[nodiscard]] double value(double t) const;
  /// (Σ, Σ', Σ'', Σ''') at t, from the jet of F^{-n} along the pullback chain.
  [[nodiscard]] Jet jet(double t) const;
  /// Derivative of the given order (0..3).
  [[nodiscard]] double eval(double t, int order) const;

 private:
  TimeAdvanceMap map_;
  double sigma_;
  double t_bar_;
  long pullback_limit_;
};

struct SigmaOptions {
  long pullback_limit = 1000000;
  long rotation_iters = 10000;
  SolverOptions solver{};
};

/// Builds Σ for a motion that is at rest for t <= 0 (SmoothedStart, or any
/// static mirror). σ is the rotation number of the periodic counterpart of
/// the motion, snapped to p/q when locked, and α for a static mirror. The seed
/// point t̄ defaults to -α and must satisfy t̄ <= -α/2.
[[nodiscard]] SigmaSolution build_sigma(const MirrorTrajectory& traj, double seed_t_bar,
                                        const SigmaOptions& options = {});
[[nodiscard]] SigmaSolution build_sigma(const MirrorTrajectory& traj, const SigmaOptions& options = {});

[[nodiscard]] double sigma_eval(const SigmaSolution& s, double t, int order);

struct SigmaSnapshot {
  int n = 0;
  long p = 0;
  double t_start = 0.0;  ///< t₁^(r) + shift·p
  std::vector<double> grid;
  std::vector<double> values;  ///< Σ(t + np) - np
  /// Σ(t_start + np) - np - Σ(t_start); vanishes once the window is past the switch-on transient.
  double endpoint_residual = 0.0;
};

/// Σ_n on n_grid uniform points of [t₁^(r), t₁^(r) + p), where t₁^(r) is the
/// first point of the repelling orbit moved forward by `shift` periods.
[[nodiscard]] SigmaSnapshot sigma_snapshot(const SigmaSolution& s, int n, int n_grid, const PeriodicOrbit& repelling,
                                           int shift = 0, unsigned threads = 1);

/// A_k(t, x) = exp(-2πik Σ(t-x)/σ) - exp(-2πik Σ(t+x)/σ). Throws DomainError
/// unless 0 <= x <= a(t).
[[nodiscard]] std::complex<double> mode_function(const SigmaSolution& s, int k, double t, double x);

}  // namespace casimir
