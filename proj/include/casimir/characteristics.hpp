#pragma once

#include <functional>
#include <vector>

#include "casimir/circle_map.hpp"

namespace casimir {

enum class Direction {
  Left,   ///< moving toward the stationary mirror at x = 0
  Right,  ///< moving toward the moving mirror at x = a(t)
};

enum class Mirror { Stationary, Moving };

[[nodiscard]] const char* to_string(Mirror m);

struct Reflection {
  double time = 0.0;
  Mirror mirror = Mirror::Stationary;
  int n_plus = 0;   ///< stationary-mirror reflections so far, this one included
  int n_minus = 0;  ///< moving-mirror reflections so far, this one included
};

/// Broken light ray through (t0, x0), with its reflections up to t_end.
struct Characteristic {
  double t0 = 0.0;
  double x0 = 0.0;
  Direction direction = Direction::Left;
  std::vector<Reflection> events;
  int n_plus = 0;
  int n_minus = 0;
};

/// Forward trace: stationary reflection times advance by F, moving-mirror
/// times are Θ of the preceding stationary time. Throws DomainError unless
/// 0 <= x0 <= a(t0).
[[nodiscard]] Characteristic trace(const TimeAdvanceMap& map, double t0, double x0, Direction direction, double t_end);

/// Initial data A(0, x) = Ψ⁺(x) + Ψ⁻(x); Ψ⁺ travels left, Ψ⁻ travels right.
struct ClassicalField {
  std::function<double(double)> psi_plus;
  std::function<double(double)> psi_minus;
};

/// Gaussian bump amplitude·exp(-(x - center)²/(2 width²)).
[[nodiscard]] std::function<double(double)> gaussian_bump(double center, double width, double amplitude);

/// Where one leg of the back-trace meets the initial data.
struct LegEnd {
  double x0 = 0.0;       ///< initial coordinate
  bool on_plus = false;  ///< read from Ψ⁺ (true) or Ψ⁻ (false)
  int reflections = 0;
};

/// Back-traced field value with its bookkeeping.
struct ClassicalSample {
  double value = 0.0;
  LegEnd right_leg;  ///< leg through (t, x) travelling right, argument t - x
  LegEnd left_leg;   ///< leg through (t, x) travelling left, argument t + x
};

/// A(t, x) for Dirichlet mirrors: both characteristics through (t, x) are
/// followed back to t = 0 and the field changes sign at every reflection.
/// Throws DomainError unless 0 <= x <= a(t) and t >= 0.
[[nodiscard]] ClassicalSample classical_trace(const TimeAdvanceMap& map, const ClassicalField& field, double t,
                                              double x);
[[nodiscard]] double classical_value(const TimeAdvanceMap& map, const ClassicalField& field, double t, double x);

/// Doppler factor D(t) gained by a narrow packet reflecting off the moving mirror at t.
[[nodiscard]] double classical_packet_gain(const TimeAdvanceMap& map, double t_refl);

}  // namespace casimir
