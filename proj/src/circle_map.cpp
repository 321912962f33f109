#include "casimir/circle_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>

#include "casimir/errors.hpp"
#include "casimir/root_finding.hpp"

namespace casimir {
namespace {

double frac(double t) { return t - std::floor(t); }

}  // namespace

// ---------------------------------------------------------------------------
// TimeAdvanceMap

TimeAdvanceMap::TimeAdvanceMap(MirrorTrajectory traj, SolverOptions options)
    : traj_(std::move(traj)), options_(options) {
  const TrajectoryBounds& b = traj_.bounds();
  if (!(b.a_min > 0.0)) throw ConstraintViolation("a(t) > 0 violated: cavity collapses");
  if (!(b.max_speed < 1.0)) throw ConstraintViolation("|a'(t)| < 1 violated: mirror faster than light");
  if (!(b.a_max < 0.5)) {
    throw ConstraintViolation("a(t) < 1/2 violated: circle map not invertible (max a = " +
                              std::to_string(b.a_max) + ")");
  }
}

double TimeAdvanceMap::solve(double t, double sign) const {
  const TrajectoryBounds& b = traj_.bounds();
  const double pad = options_.bracket_pad;
  // s - sign*a(s) = t has s in t + sign*[a_min, a_max].
  double lo = sign > 0 ? t + b.a_min - pad : t - b.a_max - pad;
  double hi = sign > 0 ? t + b.a_max + pad : t - b.a_min + pad;
  if (traj_.params().beta == 0.0) return t + sign * traj_.params().alpha / 2.0;
  const double tol = std::max(options_.newton_tol, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(t));
  auto f_df = [&](double s) {
    const Jet a = traj_.eval(s);
    return std::pair{s - sign * a.value - t, 1.0 - sign * a.d1};
  };
  return roots::newton_in_bracket(f_df, lo, hi, true, tol, options_.max_newton_iters).root;
}

double TimeAdvanceMap::theta(double t) const {
  if (is_lift()) {
    const double k = std::floor(t);
    return k + solve(t - k, +1.0);
  }
  return solve(t, +1.0);
}

double TimeAdvanceMap::theta_tilde(double t) const {
  if (is_lift()) {
    const double k = std::floor(t);
    return k + solve(t - k, -1.0);
  }
  return solve(t, -1.0);
}

Jet TimeAdvanceMap::theta_jet(double t) const {
  const double s = theta(t);
  const Jet a = traj_.eval(s);
  const double u = 1.0 / (1.0 - a.d1);
  const double u2 = u * u;
  return {s, u, a.d2 * u2 * u, a.d3 * u2 * u2 + 3.0 * a.d2 * a.d2 * u2 * u2 * u};
}

Jet TimeAdvanceMap::theta_tilde_jet(double t) const {
  const double s = theta_tilde(t);
  const Jet a = traj_.eval(s);
  const double v = 1.0 / (1.0 + a.d1);
  const double v2 = v * v;
  return {s, v, -a.d2 * v2 * v, -a.d3 * v2 * v2 + 3.0 * a.d2 * a.d2 * v2 * v2 * v};
}

double TimeAdvanceMap::advance(double t) const {
  if (is_lift()) {
    const double k = std::floor(t);
    const double s = solve(t - k, +1.0);
    return k + (s + traj_.position(s));
  }
  const double s = solve(t, +1.0);
  return s + traj_.position(s);
}

double TimeAdvanceMap::inverse_advance(double t) const {
  if (is_lift()) {
    const double k = std::floor(t);
    const double s = solve(t - k, -1.0);
    return k + (s - traj_.position(s));
  }
  const double s = solve(t, -1.0);
  return s - traj_.position(s);
}

// With u = Θ' = 1/(1 - a'(Θ)):
//   F' = (1 + a')u,  F'' = 2a''u³,  F''' = 2a'''u⁴ + 6a''²u⁵.
Jet TimeAdvanceMap::advance_jet(double t) const {
  const double k = is_lift() ? std::floor(t) : 0.0;
  const double s = solve(t - k, +1.0);
  const Jet a = traj_.eval(s);
  const double u = 1.0 / (1.0 - a.d1);
  const double u3 = u * u * u;
  return {k + (s + a.value), (1.0 + a.d1) * u, 2.0 * a.d2 * u3,
          2.0 * a.d3 * u3 * u + 6.0 * a.d2 * a.d2 * u3 * u * u};
}

// Same formulas with a -> -a.
Jet TimeAdvanceMap::inverse_jet(double t) const {
  const double k = is_lift() ? std::floor(t) : 0.0;
  const double s = solve(t - k, -1.0);
  const Jet a = traj_.eval(s);
  const double v = 1.0 / (1.0 + a.d1);
  const double v3 = v * v * v;
  return {k + (s - a.value), (1.0 - a.d1) * v, -2.0 * a.d2 * v3,
          -2.0 * a.d3 * v3 * v + 6.0 * a.d2 * a.d2 * v3 * v * v};
}

RigidRotation::RigidRotation(double sigma) : sigma_(sigma) {
  if (!(sigma >= 0.0 && sigma < 1.0)) throw std::invalid_argument("rigid_rotation: sigma must lie in [0, 1)");
}

// ---------------------------------------------------------------------------
// Derivatives and iterates

double map_derivative(const CircleLift& map, double t, int order) {
  if (order < 1 || order > 3) throw std::invalid_argument("map_derivative: order must be 1, 2 or 3");
  return map.advance_jet(t)[order];
}

double schwarzian_of_map(const CircleLift& map, double t) { return schwarzian(map.advance_jet(t)); }

Jet iterate_jet(const CircleLift& map, double t, int n) {
  Jet acc = Jet::identity(t);
  for (int k = 0; k < n; ++k) acc = compose(map.advance_jet(acc.value), acc);
  return acc;
}

double schwarzian_of_iterate(const CircleLift& map, double t, int n) {
  double sum = 0.0;
  double dk = 1.0;  // (F^k)'(t)
  double x = t;
  for (int k = 0; k < n; ++k) {
    const Jet j = map.advance_jet(x);
    sum += schwarzian(j) * dk * dk;
    dk *= j.d1;
    x = j.value;
  }
  return sum;
}

OrbitSample iterate(const CircleLift& map, double t, int n) {
  if (n < 0) throw std::invalid_argument("iterate: n must be non-negative");
  OrbitSample out;
  out.times.reserve(n);
  out.derivatives.reserve(n);
  double x = t;
  double d = 1.0;
  for (int k = 0; k < n; ++k) {
    const Jet j = map.advance_jet(x);
    d *= j.d1;
    x = j.value;
    out.times.push_back(x);
    out.derivatives.push_back(d);
  }
  return out;
}

std::pair<double, double> periodicity_defect(const CircleLift& map, double t, long p, long q) {
  const double base = map.is_lift() ? frac(t) : t;
  double x = base;
  double d = 1.0;
  for (long k = 0; k < q; ++k) {
    const Jet j = map.advance_jet(x);
    d *= j.d1;
    x = j.value;
  }
  return {x - base - static_cast<double>(p), d - 1.0};
}

// ---------------------------------------------------------------------------
// Rotation number

std::vector<std::pair<long, long>> convergents(double x, long q_max) {
  std::vector<std::pair<long, long>> out;
  if (!(x >= 0.0) || !std::isfinite(x)) return out;
  long p_prev = 1, q_prev = 0;
  double a = std::floor(x);
  long p = static_cast<long>(a), q = 1;
  out.emplace_back(p, q);
  double r = x - a;
  for (int depth = 0; depth < 40 && r > 1e-15; ++depth) {
    const double y = 1.0 / r;
    a = std::floor(y);
    if (a > 1e9) break;
    const long ai = static_cast<long>(a);
    const long p_next = ai * p + p_prev;
    const long q_next = ai * q + q_prev;
    if (q_next > q_max) break;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
    out.emplace_back(p, q);
    r = y - a;
  }
  return out;
}

namespace {

struct Polished {
  double point;
  double residual;
  double multiplier;
};

// Newton on g(t) = F^q(t) - t - p from t, keeping the best iterate.
Polished polish_periodic_point(const CircleLift& map, double t, long p, long q) {
  double x = map.is_lift() ? frac(t) : t;
  auto [g, dg] = periodicity_defect(map, x, p, q);
  Polished best{x, std::abs(g), dg + 1.0};
  for (int it = 0; it < 40 && best.residual > 1e-14; ++it) {
    if (dg == 0.0) break;
    double step = g / dg;
    step = std::clamp(step, -0.05, 0.05);
    x -= step;
    if (map.is_lift()) x = frac(x);
    std::tie(g, dg) = periodicity_defect(map, x, p, q);
    if (std::abs(g) < best.residual) best = {x, std::abs(g), dg + 1.0};
  }
  return best;
}

}  // namespace

RotationNumberEstimate rotation_number(const CircleLift& map, double t0, long n_max, double snap_tol,
                                       int q_max) {
  if (n_max < 100) throw std::invalid_argument("rotation_number: n_max must be at least 100");
  RotationNumberEstimate est;
  est.start_point = t0;
  const bool lift = map.is_lift();

  // Position kept as winding + phase so long runs do not lose digits.
  struct State {
    std::int64_t winding;
    double phase;
  };
  const std::size_t ring = static_cast<std::size_t>(q_max) + 1;
  std::vector<State> history(ring);
  State s{lift ? static_cast<std::int64_t>(std::floor(t0)) : 0, lift ? frac(t0) : t0};
  const State start = s;
  history[0] = s;
  auto displacement = [](const State& a, const State& b) {
    return static_cast<double>(a.winding - b.winding) + (a.phase - b.phase);
  };

  constexpr long kCheckEvery = 32;
  long n = 0;
  for (n = 1; n <= n_max; ++n) {
    const double y = map.advance(s.phase);
    if (lift) {
      const double k = std::floor(y);
      s = {s.winding + static_cast<std::int64_t>(k), y - k};
    } else {
      s = {0, y};
    }
    history[static_cast<std::size_t>(n) % ring] = s;

    if (!lift || n % kCheckEvery != 0 || n < 2 * kCheckEvery) continue;
    const double tau_n = displacement(s, start) / static_cast<double>(n);
    for (const auto& [p, q] : convergents(tau_n, q_max)) {
      if (q > n) continue;
      if (std::abs(tau_n - static_cast<double>(p) / q) > 1.0 / n + 1e-12) continue;
      const State& back = history[static_cast<std::size_t>(n - q) % ring];
      const double defect = displacement(s, back) - static_cast<double>(p);
      if (std::abs(defect) > 1e-3) continue;
      const Polished pol = polish_periodic_point(map, s.phase, p, q);
      if (pol.residual < snap_tol) {
        const long pr = ((p % q) + q) % q;
        est.value = static_cast<double>(pr) / q;
        est.rational = std::pair{pr, q};
        est.error_bound = pol.residual;
        est.n_iters = n;
        est.orbit_point = pol.point;
        est.multiplier = pol.multiplier;
        return est;
      }
    }
  }
  n = n_max;
  const double tau = displacement(s, start) / static_cast<double>(n);
  est.value = tau - std::floor(tau);
  est.n_iters = n;
  est.error_bound = 1.0 / static_cast<double>(n);
  return est;
}

// ---------------------------------------------------------------------------
// Periodic orbits

const char* to_string(Stability s) {
  switch (s) {
    case Stability::Attracting: return "attracting";
    case Stability::Repelling: return "repelling";
    default: return "parabolic";
  }
}

namespace {

PeriodicOrbit build_orbit(const CircleLift& map, double root, long p, long q, double parabolic_tol) {
  PeriodicOrbit orbit;
  orbit.p = p;
  orbit.q = q;
  double x = root;
  double mult = 1.0;
  for (long j = 0; j < q; ++j) {
    orbit.lifted.push_back(x);
    orbit.points.push_back(frac(x));
    const Jet jet = map.advance_jet(x);
    mult *= jet.d1;
    x = jet.value;
  }
  orbit.multiplier = mult;
  orbit.cumulative_doppler = 1.0 / mult;
  if (mult < 1.0 - parabolic_tol) {
    orbit.stability = Stability::Attracting;
  } else if (mult > 1.0 + parabolic_tol) {
    orbit.stability = Stability::Repelling;
  } else {
    orbit.stability = Stability::Parabolic;
  }
  for (double t : orbit.points) {
    orbit.residual = std::max(orbit.residual, std::abs(periodicity_defect(map, t, p, q).first));
  }
  return orbit;
}

bool on_orbit(const PeriodicOrbit& orbit, double t) {
  for (double x : orbit.points) {
    double d = std::abs(x - t);
    d = std::min(d, 1.0 - d);
    if (d < 1e-8) return true;
  }
  return false;
}

}  // namespace

OrbitSearch find_periodic_orbit(const CircleLift& map, long p, long q, const OrbitSearchOptions& options) {
  if (q < 1) throw std::invalid_argument("find_periodic_orbit: q must be positive");
  if (std::gcd(p, q) != 1) throw std::invalid_argument("find_periodic_orbit: p and q must be coprime");
  if (q > options.q_max) throw std::invalid_argument("find_periodic_orbit: q exceeds q_max");
  if (!map.is_lift()) throw std::invalid_argument("find_periodic_orbit: map is not a periodic lift");

  const int n = std::max<int>(1024, static_cast<int>(64 * q));
  std::vector<double> g(n + 1);
  bool all_zero = true;
  for (int i = 0; i < n; ++i) {
    g[i] = periodicity_defect(map, static_cast<double>(i) / n, p, q).first;
    if (std::abs(g[i]) > options.root_tol) all_zero = false;
  }
  g[n] = g[0];

  OrbitSearch out;
  if (all_zero) {
    out.continuum = true;
    out.n_roots = n;
    out.parabolic.push_back(build_orbit(map, 0.0, p, q, options.parabolic_tol));
    return out;
  }

  auto g_dg = [&](double t) { return periodicity_defect(map, t, p, q); };
  std::vector<double> roots;
  for (int i = 0; i < n; ++i) {
    const double a = static_cast<double>(i) / n;
    const double b = static_cast<double>(i + 1) / n;
    if (std::abs(g[i]) <= options.root_tol) {
      // Zero band: keep only the smallest |g| of a run of near-zero samples.
      if (i > 0 && std::abs(g[i - 1]) <= options.root_tol && std::abs(g[i - 1]) <= std::abs(g[i])) continue;
      if (std::abs(g[i + 1]) <= options.root_tol && std::abs(g[i + 1]) < std::abs(g[i])) continue;
      roots.push_back(a);
      continue;
    }
    if (std::abs(g[i + 1]) <= options.root_tol) continue;
    if ((g[i] > 0) != (g[i + 1] > 0)) {
      roots.push_back(roots::newton_in_bracket(g_dg, a, b, g[i + 1] > 0, options.root_tol, 200).root);
    }
  }
  out.n_roots = static_cast<int>(roots.size());

  for (double r : roots) {
    const double mult = g_dg(r).second + 1.0;
    const bool attracting = mult < 1.0 - options.parabolic_tol;
    const bool repelling = mult > 1.0 + options.parabolic_tol;
    if (attracting && !out.attracting) {
      out.attracting = build_orbit(map, r, p, q, options.parabolic_tol);
    } else if (repelling && !out.repelling) {
      out.repelling = build_orbit(map, r, p, q, options.parabolic_tol);
    } else if (!attracting && !repelling) {
      const bool seen = std::any_of(out.parabolic.begin(), out.parabolic.end(),
                                    [&](const PeriodicOrbit& o) { return on_orbit(o, r); });
      if (!seen) out.parabolic.push_back(build_orbit(map, r, p, q, options.parabolic_tol));
    }
  }
  return out;
}

double recover_trajectory(const CircleLift& map, double t) {
  // ½(F(u) + u) = t has u in (t - 1/2, t) because 0 < F(u) - u < 1.
  auto f_df = [&](double u) {
    const Jet j = map.advance_jet(u);
    return std::pair{0.5 * (j.value + u) - t, 0.5 * (j.d1 + 1.0)};
  };
  const double tol = std::max(1e-14, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(t));
  const double u = roots::bracketed_newton(f_df, t - 0.5, t, tol, 200).root;
  return 0.5 * (map.advance(u) - u);
}

}  // namespace casimir
