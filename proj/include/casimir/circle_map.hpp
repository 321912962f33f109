#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "casimir/jet.hpp"
#include "casimir/trajectory.hpp"

namespace casimir {

/// Lift F: R -> R of an orientation-preserving circle diffeomorphism, with
/// its inverse and derivatives to third order.
class CircleLift {
 public:
  virtual ~CircleLift() = default;

  [[nodiscard]] virtual double advance(double t) const = 0;
  [[nodiscard]] virtual double inverse_advance(double t) const = 0;
  /// (F, F', F'', F''') at t.
  [[nodiscard]] virtual Jet advance_jet(double t) const = 0;
  /// (F⁻¹, (F⁻¹)', (F⁻¹)'', (F⁻¹)''') at t.
  [[nodiscard]] virtual Jet inverse_jet(double t) const = 0;
  /// True when F(t+1) = F(t) + 1 for every t, so F projects to the circle.
  [[nodiscard]] virtual bool is_lift() const = 0;
};

struct SolverOptions {
  double newton_tol = 1e-13;  ///< absolute, on the residual s ∓ a(s) - t
  int max_newton_iters = 100;
  double bracket_pad = 1e-9;
};

/// Time-advance map F = (Id + a)∘(Id - a)⁻¹ of a mirror motion: a ray that
/// leaves the stationary mirror at t returns to it at F(t), after bouncing off
/// the moving mirror at Θ(t) = (Id - a)⁻¹(t).
class TimeAdvanceMap final : public CircleLift {
 public:
  /// Throws ConstraintViolation unless a(t) < 1/2 everywhere.
  explicit TimeAdvanceMap(MirrorTrajectory traj, SolverOptions options = {});

  [[nodiscard]] const MirrorTrajectory& trajectory() const noexcept { return traj_; }
  [[nodiscard]] const SolverOptions& options() const noexcept { return options_; }

  /// Θ(t): moving-mirror reflection time of the ray leaving x = 0 at t.
  [[nodiscard]] double theta(double t) const;
  /// Θ̃(t) = (Id + a)⁻¹(t): moving-mirror reflection time of the ray arriving at x = 0 at t.
  [[nodiscard]] double theta_tilde(double t) const;
  [[nodiscard]] Jet theta_jet(double t) const;
  [[nodiscard]] Jet theta_tilde_jet(double t) const;

  [[nodiscard]] double advance(double t) const override;
  [[nodiscard]] double inverse_advance(double t) const override;
  [[nodiscard]] Jet advance_jet(double t) const override;
  [[nodiscard]] Jet inverse_jet(double t) const override;
  [[nodiscard]] bool is_lift() const override { return traj_.is_periodic(); }

 private:
  // Root of s - sign*a(s) = t.
  [[nodiscard]] double solve(double t, double sign) const;

  MirrorTrajectory traj_;
  SolverOptions options_;
};

/// R_σ(t) = t + σ.
class RigidRotation final : public CircleLift {
 public:
  explicit RigidRotation(double sigma);

  [[nodiscard]] double sigma() const noexcept { return sigma_; }
  [[nodiscard]] double advance(double t) const override { return t + sigma_; }
  [[nodiscard]] double inverse_advance(double t) const override { return t - sigma_; }
  [[nodiscard]] Jet advance_jet(double t) const override { return {t + sigma_, 1.0, 0.0, 0.0}; }
  [[nodiscard]] Jet inverse_jet(double t) const override { return {t - sigma_, 1.0, 0.0, 0.0}; }
  [[nodiscard]] bool is_lift() const override { return true; }

 private:
  double sigma_;
};

[[nodiscard]] inline RigidRotation rigid_rotation(double sigma) { return RigidRotation(sigma); }

/// F^(order)(t) for order in 1..3.
[[nodiscard]] double map_derivative(const CircleLift& map, double t, int order);

/// Schwarzian derivative of F at t.
[[nodiscard]] double schwarzian_of_map(const CircleLift& map, double t);

/// Jet of the n-th iterate Fⁿ at t (identity jet for n = 0).
[[nodiscard]] Jet iterate_jet(const CircleLift& map, double t, int n);

/// Schwarzian of Fⁿ at t assembled from the cocycle sum
/// Σ_k S_F(F^k t)·[(F^k)'(t)]².
[[nodiscard]] double schwarzian_of_iterate(const CircleLift& map, double t, int n);

struct OrbitSample {
  std::vector<double> times;        ///< F(t), F²(t), …, Fⁿ(t)
  std::vector<double> derivatives;  ///< (F^k)'(t) for k = 1..n
  /// (Fⁿ)'(t); 1 for an empty orbit.
  [[nodiscard]] double product() const { return derivatives.empty() ? 1.0 : derivatives.back(); }
};

[[nodiscard]] OrbitSample iterate(const CircleLift& map, double t, int n);

struct RotationNumberEstimate {
  double value = 0.0;  ///< in [0, 1)
  long n_iters = 0;
  double error_bound = 0.0;
  double start_point = 0.0;
  /// Set when an attracting periodic orbit was found and the value snapped to p/q.
  std::optional<std::pair<long, long>> rational;
  std::optional<double> orbit_point;  ///< polished periodic point behind the snap
  std::optional<double> multiplier;   ///< (F^q)' at orbit_point
  /// Snapped onto a hyperbolic orbit (|multiplier - 1| > 1e-6), i.e. genuine locking
  /// rather than a rigid rotation by a rational angle.
  [[nodiscard]] bool locked() const {
    return rational && multiplier && std::abs(*multiplier - 1.0) > 1e-6;
  }
};

/// Average rotation lim (Fⁿ(t0) - t0)/n. Without a snap the error bound is
/// 1/n. When the iterates settle onto a q-periodic orbit whose residual
/// |F^q(t*) - t* - p| after Newton polishing is below `snap_tol`, the value
/// is snapped to p/q and the error bound is that residual.
[[nodiscard]] RotationNumberEstimate rotation_number(const CircleLift& map, double t0 = 0.0,
                                                     long n_max = 10000, double snap_tol = 1e-9,
                                                     int q_max = 64);

enum class Stability { Attracting, Repelling, Parabolic };

[[nodiscard]] const char* to_string(Stability s);

struct PeriodicOrbit {
  long p = 0;
  long q = 1;
  std::vector<double> points;  ///< t_1 … t_q in [0, 1), t_{j+1} = f(t_j)
  double multiplier = 1.0;     ///< (F^q)'(t_1)
  Stability stability = Stability::Parabolic;
  double cumulative_doppler = 1.0;  ///< 1/multiplier
  double residual = 0.0;            ///< max_j |F^q(t_j) - t_j - p|
  /// Orbit points lifted along the F-chain: t_1, F(t_1), …, F^{q-1}(t_1).
  std::vector<double> lifted;
};

struct OrbitSearch {
  std::optional<PeriodicOrbit> attracting;
  std::optional<PeriodicOrbit> repelling;
  /// Orbits with |multiplier - 1| <= 1e-6, reported instead of thrown.
  std::vector<PeriodicOrbit> parabolic;
  /// F^q = Id + p on the whole grid (rigid rotation by p/q).
  bool continuum = false;
  int n_roots = 0;

  [[nodiscard]] bool found() const { return attracting || repelling || !parabolic.empty() || continuum; }
};

struct OrbitSearchOptions {
  int q_max = 64;
  double root_tol = 1e-12;
  double parabolic_tol = 1e-6;
};

/// All solutions of F^q(t) = t + p on [0, 1): sign-change scan on
/// max(1024, 64q) points, bracketed Newton polish, classification by
/// multiplier. Requires a periodic lift and gcd(p, q) = 1.
[[nodiscard]] OrbitSearch find_periodic_orbit(const CircleLift& map, long p, long q,
                                              const OrbitSearchOptions& options = {});

/// Mirror position reconstructed from the map alone via
/// a = ½(F - Id)∘[½(F + Id)]⁻¹.
[[nodiscard]] double recover_trajectory(const CircleLift& map, double t);

/// Continued-fraction convergents p/q of x with q <= q_max (x >= 0).
[[nodiscard]] std::vector<std::pair<long, long>> convergents(double x, long q_max);

/// g(t) = F^q(t) - t - p and g'(t), with t reduced modulo 1 for periodic lifts.
[[nodiscard]] std::pair<double, double> periodicity_defect(const CircleLift& map, double t, long p,
                                                           long q);

}  // namespace casimir
