#include "casimir/characteristics.hpp"

#include <cmath>
#include <string>

#include "casimir/errors.hpp"

namespace casimir {
namespace {

void require_in_cavity(const TimeAdvanceMap& map, double t, double x, const char* who) {
  const double a = map.trajectory().position(t);
  if (!(x >= 0.0 && x <= a)) {
    throw DomainError(std::string(who) + ": x=" + std::to_string(x) + " outside [0, a(t)=" + std::to_string(a) + "]");
  }
}

// Follows a leg backwards. A right-moving leg is labelled by ξ = t - x, a
// left-moving one by η = t + x.
LegEnd back_trace(const TimeAdvanceMap& map, double label, bool moving_right) {
  LegEnd end;
  constexpr int kMaxReflections = 10000000;
  for (;;) {
    if (moving_right) {
      // Came off the stationary mirror at time ξ, or was already in flight at t = 0.
      if (label <= 0.0) {
        end.x0 = -label;
        end.on_plus = false;
        return end;
      }
      moving_right = false;
    } else {
      const double s = map.theta_tilde(label);  // moving-mirror reflection time
      if (s <= 0.0) {
        end.x0 = label;
        end.on_plus = true;
        return end;
      }
      label = s - map.trajectory().position(s);
      moving_right = true;
    }
    if (++end.reflections > kMaxReflections) throw ConvergenceFailure("classical_trace: too many reflections");
  }
}

}  // namespace

const char* to_string(Mirror m) { return m == Mirror::Stationary ? "stationary" : "moving"; }

Characteristic trace(const TimeAdvanceMap& map, double t0, double x0, Direction direction, double t_end) {
  require_in_cavity(map, t0, x0, "trace");
  Characteristic c{t0, x0, direction, {}, 0, 0};
  // Stationary-mirror time from which the alternation F, Θ proceeds.
  double t_stat = direction == Direction::Left ? t0 + x0 : t0 - x0;
  bool pending_stationary = direction == Direction::Left;
  for (;;) {
    if (pending_stationary) {
      if (t_stat > t_end) break;
      ++c.n_plus;
      c.events.push_back({t_stat, Mirror::Stationary, c.n_plus, c.n_minus});
    }
    const double t_mov = map.theta(t_stat);
    if (t_mov > t_end) break;
    ++c.n_minus;
    c.events.push_back({t_mov, Mirror::Moving, c.n_plus, c.n_minus});
    t_stat = t_mov + map.trajectory().position(t_mov);
    pending_stationary = true;
  }
  return c;
}

std::function<double(double)> gaussian_bump(double center, double width, double amplitude) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian_bump: width must be positive");
  return [=](double x) {
    const double z = (x - center) / width;
    return amplitude * std::exp(-0.5 * z * z);
  };
}

ClassicalSample classical_trace(const TimeAdvanceMap& map, const ClassicalField& field, double t, double x) {
  if (!(t >= 0.0)) throw DomainError("classical_trace: t must be non-negative");
  require_in_cavity(map, t, x, "classical_trace");
  ClassicalSample out;
  out.right_leg = back_trace(map, t - x, true);
  out.left_leg = back_trace(map, t + x, false);
  auto read = [&](const LegEnd& e) {
    const double v = e.on_plus ? field.psi_plus(e.x0) : field.psi_minus(e.x0);
    return e.reflections % 2 == 0 ? v : -v;
  };
  out.value = read(out.right_leg) + read(out.left_leg);
  return out;
}

double classical_value(const TimeAdvanceMap& map, const ClassicalField& field, double t, double x) {
  return classical_trace(map, field, t, x).value;
}

double classical_packet_gain(const TimeAdvanceMap& map, double t_refl) { return doppler(map.trajectory(), t_refl); }

}  // namespace casimir
