#pragma once

#include <string>
#include <vector>

#include "casimir/jet.hpp"

namespace casimir {

enum class TrajectoryFamily {
  /// a(t) = α/2 + β/(2π) sin(2πt + γ sin²(4πt)), 1-periodic.
  Sine,
  /// Mirror at rest (a = α/2) for t <= 0, then the Sine motion switched on
  /// through the factor 1 - exp(-t⁴).
  SmoothedStart,
};

[[nodiscard]] std::string to_string(TrajectoryFamily family);
[[nodiscard]] TrajectoryFamily family_from_string(const std::string& name);

struct TrajectoryParams {
  TrajectoryFamily family = TrajectoryFamily::Sine;
  double alpha = 0.0;  ///< mean cavity length is α/2
  double beta = 0.0;   ///< amplitude: a oscillates by ±β/(2π)
  double gamma = 0.0;  ///< anharmonicity of the phase
};

/// Extremes of the mirror motion, widened outward by 1e-9 so they can be used
/// directly as root-finding brackets.
struct TrajectoryBounds {
  double a_min = 0.0;
  double a_max = 0.0;
  double max_speed = 0.0;
};

/// Periodic position a(t) of the moving mirror, with exact derivatives up to
/// third order. Immutable once constructed.
class MirrorTrajectory {
 public:
  /// Builds a trajectory without checking the physical constraints. Used by
  /// validate() and by tests that need deliberately bad motions.
  static MirrorTrajectory unchecked(const TrajectoryParams& params);

  [[nodiscard]] const TrajectoryParams& params() const noexcept { return params_; }
  [[nodiscard]] TrajectoryFamily family() const noexcept { return params_.family; }
  [[nodiscard]] const TrajectoryBounds& bounds() const noexcept { return bounds_; }

  /// (a, a', a'', a''') at t.
  [[nodiscard]] Jet eval(double t) const;
  [[nodiscard]] double position(double t) const { return eval(t).value; }

  /// True when a(t+1) = a(t) for every t.
  [[nodiscard]] bool is_periodic() const noexcept {
    return params_.family == TrajectoryFamily::Sine || params_.beta == 0.0;
  }

  /// Time after which a SmoothedStart motion agrees with its Sine counterpart
  /// to double precision (exp(-t⁴) < 1e-17). Zero for periodic motions.
  [[nodiscard]] double settle_time() const noexcept { return is_periodic() ? 0.0 : 2.5; }

  /// The Sine motion with the same (α, β, γ).
  [[nodiscard]] MirrorTrajectory periodic_counterpart() const;

 private:
  explicit MirrorTrajectory(const TrajectoryParams& params);

  TrajectoryParams params_;
  TrajectoryBounds bounds_;
};

/// a(t) = α/2 + β/(2π) sin(2πt + γ sin²(4πt)). Throws ConstraintViolation when
/// α/2 > |β|/(2π) or |β|(1 + 2|γ|) < 1 fails.
[[nodiscard]] MirrorTrajectory make_sine(const TrajectoryParams& params);

/// Stationary mirror for t <= 0, smoothly switched-on Sine motion for t > 0.
[[nodiscard]] MirrorTrajectory make_smoothed_start(const TrajectoryParams& params);

/// Dispatches on params.family.
[[nodiscard]] MirrorTrajectory make_trajectory(const TrajectoryParams& params);

/// Throws ConstraintViolation naming the first violated constructor guard.
void check_constraints(const TrajectoryParams& params);

/// Doppler factor (1 - a')/(1 + a') for a reflection at time t.
[[nodiscard]] double doppler(const MirrorTrajectory& traj, double t);

struct ValidationReport {
  double min_a = 0.0;
  double max_a = 0.0;
  double max_speed = 0.0;
  double periodicity_residual = 0.0;
  bool positive = false;      ///< a(t) > 0
  bool subluminal = false;    ///< |a'(t)| < 1
  bool short_cavity = false;  ///< a(t) < 1/2, needed for an invertible circle map
  bool periodic = false;      ///< a(t+1) = a(t) past the switch-on transient

  [[nodiscard]] bool ok() const { return positive && subluminal && short_cavity && periodic; }
  /// Human-readable names of the failed checks.
  [[nodiscard]] std::vector<std::string> failures() const;
};

/// Dense-grid scan of the motion (n_grid >= 1000 points per unit time) with
/// golden-section refinement at the sampled extremes. Failures are reported,
/// never thrown.
[[nodiscard]] ValidationReport validate(const MirrorTrajectory& traj, int n_grid = 4096);
[[nodiscard]] ValidationReport validate(const TrajectoryParams& params, int n_grid = 4096);

}  // namespace casimir
