#include "casimir/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "casimir/errors.hpp"
#include "casimir/root_finding.hpp"

namespace casimir {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBoundsPad = 1e-9;
constexpr int kBoundsGrid = 4096;

struct Extremes {
  double min_a;
  double max_a;
  double max_speed;
};

// Grid scan over [t0, t1) followed by golden-section polishing of each
// sampled extreme on its two neighbouring cells.
Extremes scan_extremes(const MirrorTrajectory& traj, double t0, double t1, int n) {
  const double h = (t1 - t0) / n;
  int i_min = 0;
  int i_max = 0;
  int i_speed = 0;
  Extremes e{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0.0};
  for (int i = 0; i < n; ++i) {
    const Jet j = traj.eval(t0 + i * h);
    if (j.value < e.min_a) {
      e.min_a = j.value;
      i_min = i;
    }
    if (j.value > e.max_a) {
      e.max_a = j.value;
      i_max = i;
    }
    if (std::abs(j.d1) > e.max_speed) {
      e.max_speed = std::abs(j.d1);
      i_speed = i;
    }
  }
  constexpr double kTol = 1e-12;
  auto cell = [&](int i) { return std::pair{t0 + (i - 1) * h, t0 + (i + 1) * h}; };
  {
    auto [lo, hi] = cell(i_min);
    auto r = roots::golden_minimize([&](double t) { return traj.position(t); }, lo, hi, kTol);
    e.min_a = std::min(e.min_a, r.second);
  }
  {
    auto [lo, hi] = cell(i_max);
    auto r = roots::golden_minimize([&](double t) { return -traj.position(t); }, lo, hi, kTol);
    e.max_a = std::max(e.max_a, -r.second);
  }
  {
    auto [lo, hi] = cell(i_speed);
    auto r = roots::golden_minimize([&](double t) { return -std::abs(traj.eval(t).d1); }, lo, hi, kTol);
    e.max_speed = std::max(e.max_speed, -r.second);
  }
  return e;
}

Extremes merge(const Extremes& a, const Extremes& b) {
  return {std::min(a.min_a, b.min_a), std::max(a.max_a, b.max_a), std::max(a.max_speed, b.max_speed)};
}

Extremes extremes_of(const MirrorTrajectory& traj, int n_per_unit) {
  if (traj.is_periodic()) return scan_extremes(traj, 0.0, 1.0, n_per_unit);
  // Switch-on transient, then the periodic regime it converges to.
  const double alpha_half = traj.params().alpha / 2.0;
  Extremes e{alpha_half, alpha_half, 0.0};
  const double settle = traj.settle_time() + 1.5;
  e = merge(e, scan_extremes(traj, 0.0, settle, static_cast<int>(n_per_unit * settle)));
  e = merge(e, scan_extremes(traj.periodic_counterpart(), 0.0, 1.0, n_per_unit));
  return e;
}

// Derivatives of sin(φ(t)) with φ = 2πt + γ sin²(4πt); t is reduced modulo 1.
Jet sine_part(double t, double gamma) {
  const double r = t - std::floor(t);
  const double s4 = std::sin(4.0 * kPi * r);
  const double c4 = std::cos(4.0 * kPi * r);
  const double s8 = 2.0 * s4 * c4;
  const double c8 = 1.0 - 2.0 * s4 * s4;
  const double phi = 2.0 * kPi * r + gamma * s4 * s4;
  const double p1 = 2.0 * kPi + 4.0 * kPi * gamma * s8;
  const double p2 = 32.0 * kPi * kPi * gamma * c8;
  const double p3 = -256.0 * kPi * kPi * kPi * gamma * s8;
  const double sp = std::sin(phi);
  const double cp = std::cos(phi);
  return {sp, cp * p1, -sp * p1 * p1 + cp * p2, -cp * p1 * p1 * p1 - 3.0 * sp * p1 * p2 + cp * p3};
}

}  // namespace

std::string to_string(TrajectoryFamily family) {
  return family == TrajectoryFamily::Sine ? "sine" : "smoothed";
}

TrajectoryFamily family_from_string(const std::string& name) {
  if (name == "sine" || name == "Sine") return TrajectoryFamily::Sine;
  if (name == "smoothed" || name == "SmoothedStart" || name == "smoothed_start") {
    return TrajectoryFamily::SmoothedStart;
  }
  throw std::invalid_argument("unknown trajectory family '" + name + "'");
}

MirrorTrajectory::MirrorTrajectory(const TrajectoryParams& params) : params_(params) {
  const Extremes e = extremes_of(*this, kBoundsGrid);
  bounds_ = {e.min_a - kBoundsPad, e.max_a + kBoundsPad, e.max_speed + kBoundsPad};
}

MirrorTrajectory MirrorTrajectory::unchecked(const TrajectoryParams& params) {
  return MirrorTrajectory(params);
}

MirrorTrajectory MirrorTrajectory::periodic_counterpart() const {
  TrajectoryParams p = params_;
  p.family = TrajectoryFamily::Sine;
  return MirrorTrajectory(p);
}

Jet MirrorTrajectory::eval(double t) const {
  const double half = params_.alpha / 2.0;
  const double amp = params_.beta / (2.0 * kPi);
  if (params_.family == TrajectoryFamily::SmoothedStart && t <= 0.0) return Jet::constant(half);
  if (amp == 0.0) return Jet::constant(half);
  const Jet g = sine_part(t, params_.gamma);
  if (params_.family == TrajectoryFamily::Sine) {
    return {half + amp * g.value, amp * g.d1, amp * g.d2, amp * g.d3};
  }
  // Switch-on factor s = 1 - exp(-t⁴) and the product rule.
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double t4 = t2 * t2;
  const double e = std::exp(-t4);
  const double s = -std::expm1(-t4);
  const double s1 = 4.0 * t3 * e;
  const double s2 = (12.0 * t2 - 16.0 * t4 * t2) * e;
  const double s3 = (24.0 * t - 144.0 * t4 * t + 64.0 * t4 * t4 * t) * e;
  const double h0 = s * g.value;
  const double h1 = s1 * g.value + s * g.d1;
  const double h2 = s2 * g.value + 2.0 * s1 * g.d1 + s * g.d2;
  const double h3 = s3 * g.value + 3.0 * s2 * g.d1 + 3.0 * s1 * g.d2 + s * g.d3;
  return {half + amp * h0, amp * h1, amp * h2, amp * h3};
}

void check_constraints(const TrajectoryParams& p) {
  if (!std::isfinite(p.alpha) || !std::isfinite(p.beta) || !std::isfinite(p.gamma)) {
    throw ConstraintViolation("trajectory parameters must be finite");
  }
  if (!(p.alpha / 2.0 > std::abs(p.beta) / (2.0 * kPi))) {
    std::ostringstream os;
    os << "alpha/2 > |beta|/(2 pi) violated (alpha=" << p.alpha << ", beta=" << p.beta << ")";
    throw ConstraintViolation(os.str());
  }
  if (!(std::abs(p.beta) * (1.0 + 2.0 * std::abs(p.gamma)) < 1.0)) {
    std::ostringstream os;
    os << "|beta|(1 + 2|gamma|) < 1 violated (beta=" << p.beta << ", gamma=" << p.gamma << ")";
    throw ConstraintViolation(os.str());
  }
}

MirrorTrajectory make_sine(const TrajectoryParams& params) {
  TrajectoryParams p = params;
  p.family = TrajectoryFamily::Sine;
  check_constraints(p);
  return MirrorTrajectory::unchecked(p);
}

MirrorTrajectory make_smoothed_start(const TrajectoryParams& params) {
  TrajectoryParams p = params;
  p.family = TrajectoryFamily::SmoothedStart;
  check_constraints(p);
  return MirrorTrajectory::unchecked(p);
}

MirrorTrajectory make_trajectory(const TrajectoryParams& params) {
  return params.family == TrajectoryFamily::Sine ? make_sine(params) : make_smoothed_start(params);
}

double doppler(const MirrorTrajectory& traj, double t) {
  const double v = traj.eval(t).d1;
  return (1.0 - v) / (1.0 + v);
}

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> out;
  if (!positive) out.emplace_back("a(t) > 0");
  if (!subluminal) out.emplace_back("|a'(t)| < 1");
  if (!short_cavity) out.emplace_back("a(t) < 1/2");
  if (!periodic) out.emplace_back("a(t+1) = a(t)");
  return out;
}

ValidationReport validate(const MirrorTrajectory& traj, int n_grid) {
  if (n_grid < 1000) throw std::invalid_argument("validate: n_grid must be at least 1000");
  const Extremes e = extremes_of(traj, n_grid);
  ValidationReport r;
  r.min_a = e.min_a;
  r.max_a = e.max_a;
  r.max_speed = e.max_speed;
  const double t0 = traj.is_periodic() ? 0.0 : traj.settle_time();
  for (int i = 0; i < n_grid; ++i) {
    const double t = t0 + static_cast<double>(i) / n_grid;
    r.periodicity_residual =
        std::max(r.periodicity_residual, std::abs(traj.position(t + 1.0) - traj.position(t)));
  }
  r.positive = r.min_a > 0.0;
  r.subluminal = r.max_speed < 1.0;
  r.short_cavity = r.max_a < 0.5;
  r.periodic = r.periodicity_residual < 1e-12;
  return r;
}

ValidationReport validate(const TrajectoryParams& params, int n_grid) {
  return validate(MirrorTrajectory::unchecked(params), n_grid);
}

}  // namespace casimir
