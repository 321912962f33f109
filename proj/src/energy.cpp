#include "casimir/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "casimir/errors.hpp"
#include "casimir/parallel.hpp"

namespace casimir {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNorm = 1.0 / (24.0 * kPi);

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double upper = v[mid];
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double trapezoid(const PhiFunction& P, double t, double lo, double hi, int m) {
  const double h = (hi - lo) / m;
  double sum = 0.5 * (energy_density(P, t, lo) + energy_density(P, t, hi));
  for (int i = 1; i < m; ++i) sum += energy_density(P, t, lo + i * h);
  return sum * h;
}

}  // namespace

double PhiFunction::operator()(double xi) const {
  const Jet j = sigma_.jet(xi);
  const double s = sigma_.sigma();
  return schwarzian(j) + 2.0 * kPi * kPi / (s * s) * j.d1 * j.d1;
}

double phi(const PhiFunction& P, double xi) { return P(xi); }

double energy_density(const PhiFunction& P, double t, double x) {
  const double a = P.map().trajectory().position(t);
  if (!(x >= 0.0 && x <= a)) {
    throw DomainError("energy_density: x=" + std::to_string(x) + " outside [0, a(t)=" + std::to_string(a) + "]");
  }
  return -kNorm * (P(t + x) + P(t - x));
}

EnergyField sample_energy(const PhiFunction& P, double t, int n_grid, unsigned threads) {
  if (n_grid < 2) throw std::invalid_argument("sample_energy: n_grid must be at least 2");
  const double a = P.map().trajectory().position(t);
  EnergyField f{t, std::vector<double>(n_grid), std::vector<double>(n_grid)};
  parallel_for(static_cast<std::size_t>(n_grid), threads, [&](std::size_t i) {
    const double x = a * static_cast<double>(i) / (n_grid - 1);
    f.x[i] = x;
    f.values[i] = energy_density(P, t, x);
  });
  return f;
}

double propagate_phi(const CircleLift& map, double phi_t, double t, int j, bool creation) {
  if (j < 0) throw std::invalid_argument("propagate_phi: j must be non-negative");
  double s_sum = 0.0;  // S_{F^k}(t)
  double dk = 1.0;     // (F^k)'(t)
  double x = t;
  for (int k = 0; k < j; ++k) {
    const Jet jet = map.advance_jet(x);
    s_sum += schwarzian(jet) * dk * dk;
    dk *= jet.d1;
    x = jet.value;
  }
  if (!creation) s_sum = 0.0;
  return (phi_t - s_sum) / (dk * dk);
}

// With N = a'''(1 - a'²) + 3a'a''²:
//   right: -N / (12π (1-a')⁴ (1+a')²),  left: +N / (12π (1-a')² (1+a')⁴).
double emitted_density(const MirrorTrajectory& traj, double t_e, Side side) {
  const Jet a = traj.eval(t_e);
  const double n = a.d3 * (1.0 - a.d1 * a.d1) + 3.0 * a.d1 * a.d2 * a.d2;
  const double m = 1.0 - a.d1;
  const double p = 1.0 + a.d1;
  if (side == Side::Right) return -n / (12.0 * kPi * m * m * m * m * p * p);
  return n / (12.0 * kPi * m * m * p * p * p * p);
}

double emitted_density_from_map(const TimeAdvanceMap& map, double t_e, Side side) {
  const double a = map.trajectory().position(t_e);
  if (side == Side::Right) return -kNorm * schwarzian(map.advance_jet(t_e - a));
  return -kNorm * schwarzian(map.inverse_jet(t_e + a));
}

DecompositionReport decompose_along_characteristic(const PhiFunction& P, double t_plus) {
  const TimeAdvanceMap& map = P.map();
  DecompositionReport r;
  r.t_plus = t_plus;
  const Jet j1 = map.advance_jet(t_plus);
  const Jet j2 = map.advance_jet(j1.value);
  r.doppler_first = 1.0 / j1.d1;
  r.doppler_second = 1.0 / j2.d1;
  const double d1sq = r.doppler_first * r.doppler_first;
  const double d2sq = r.doppler_second * r.doppler_second;

  r.initial = -kNorm * P(t_plus);
  r.amplified_initial = d1sq * d2sq * r.initial;
  r.creation_factor = kNorm * schwarzian(j1) / (j1.d1 * j1.d1);
  r.first_creation = d2sq * r.creation_factor;
  r.second_creation = kNorm * schwarzian(j2) / (j2.d1 * j2.d1);
  r.sum = r.amplified_initial + r.first_creation + r.second_creation;
  r.direct = -kNorm * P(j2.value);
  r.sum_relative_error = std::abs(r.sum - r.direct) / std::max(std::abs(r.direct), 1e-300);

  const double theta = map.theta(t_plus);
  const double eta = theta + map.trajectory().position(theta);
  r.left_emission = -kNorm * schwarzian(map.inverse_jet(eta));
  r.creation_identity_error = std::abs(r.creation_factor - r.left_emission);
  return r;
}

double resonant_phi(double phi_star, double doppler_q, double schwarzian_q, int n) {
  if (n < 0) throw std::invalid_argument("resonant_phi: n must be non-negative");
  if (doppler_q == 1.0) return phi_star - n * schwarzian_q;
  const double r = 1.0 / (doppler_q * doppler_q);
  double geometric = 0.0;
  if (std::abs(doppler_q - 1.0) < 1e-4) {
    double term = 1.0;
    for (int j = 0; j < n; ++j) {
      geometric += term;
      term *= r;
    }
  } else {
    geometric = (1.0 - std::pow(r, n)) / (1.0 - r);
  }
  return std::pow(doppler_q, 2.0 * n) * (phi_star - geometric * schwarzian_q);
}

double resonant_asymptotics(const CircleLift& map, const PeriodicOrbit& orbit, double phi_star, int n) {
  if (orbit.stability != Stability::Attracting) {
    throw std::invalid_argument("resonant_asymptotics: orbit must be attracting");
  }
  const double t_star = orbit.points.front();
  const double s_q = schwarzian_of_iterate(map, t_star, static_cast<int>(orbit.q));
  return resonant_phi(phi_star, orbit.cumulative_doppler, s_q, n);
}

std::vector<double> attracting_positions(const MirrorTrajectory& traj, const PeriodicOrbit& attracting, double t) {
  const double a = traj.position(t);
  std::vector<double> xs;
  for (double tj : attracting.points) {
    for (double xi = tj + std::ceil(t - a - tj); xi < t + a; xi += 1.0) {
      xs.push_back(std::abs(xi - t));
    }
  }
  std::sort(xs.begin(), xs.end());
  return xs;
}

PacketReport packet_analysis(const PhiFunction& P, const PeriodicOrbit& attracting, double t, int n_grid,
                             const PacketOptions& options) {
  if (n_grid < 16) throw std::invalid_argument("packet_analysis: n_grid must be at least 16");
  PacketReport rep;
  rep.t = t;
  rep.predicted_x = attracting_positions(P.map().trajectory(), attracting, t);
  const EnergyField field = sample_energy(P, t, n_grid, options.threads);
  rep.background = median(field.values);
  std::vector<double> dev(field.values.size());
  for (std::size_t i = 0; i < dev.size(); ++i) {
    dev[i] = field.values[i] - rep.background;
    rep.peak = std::max(rep.peak, std::abs(dev[i]));
  }
  if (rep.peak < options.min_contrast * std::abs(rep.background)) {
    rep.no_packets = true;
    return rep;
  }

  const double level = options.threshold * rep.peak;
  // Linear interpolation of the threshold crossing between samples i and i+1.
  auto crossing = [&](std::size_t i) {
    const double a = std::abs(dev[i]) - level;
    const double b = std::abs(dev[i + 1]) - level;
    const double w = a / (a - b);
    return field.x[i] + w * (field.x[i + 1] - field.x[i]);
  };
  const std::size_t n = dev.size();
  for (std::size_t i = 0; i < n;) {
    if (std::abs(dev[i]) <= level) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && std::abs(dev[j + 1]) > level) ++j;
    Packet pk;
    pk.x_left = i == 0 ? field.x.front() : crossing(i - 1);
    pk.x_right = j + 1 == n ? field.x.back() : crossing(j);
    int m = std::max<int>(64, static_cast<int>(4 * (j - i + 2)));
    double e = trapezoid(P, t, pk.x_left, pk.x_right, m);
    for (int it = 0; it < 12; ++it) {
      m *= 2;
      const double e2 = trapezoid(P, t, pk.x_left, pk.x_right, m);
      const bool done = std::abs(e2 - e) <= options.energy_rel_tol * std::abs(e2);
      e = e2;
      if (done) break;
    }
    pk.energy = e;
    rep.packets.push_back(pk);
    rep.total_energy += e;
    i = j + 1;
  }
  return rep;
}

GrowthFit growth_fit(const std::vector<double>& times, const std::vector<double>& energies, double doppler_q,
                     long p) {
  if (times.size() < 2 || times.size() != energies.size()) {
    throw std::invalid_argument("growth_fit: need at least two (t, E) pairs");
  }
  GrowthFit fit{0.0, std::log(doppler_q) / static_cast<double>(p), times, energies};
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  const double k = static_cast<double>(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double y = std::log(std::abs(energies[i]));
    st += times[i];
    sy += y;
    stt += times[i] * times[i];
    sty += times[i] * y;
  }
  fit.slope = (k * sty - st * sy) / (k * stt - st * st);
  return fit;
}

GrowthFit fit_growth(const PhiFunction& P, const PeriodicOrbit& attracting, const std::vector<double>& times,
                     int n_grid, const PacketOptions& options) {
  std::vector<double> energies;
  for (double t : times) energies.push_back(packet_analysis(P, attracting, t, n_grid, options).total_energy);
  return growth_fit(times, energies, attracting.cumulative_doppler, attracting.p);
}

std::vector<ShapeProfile> packet_shape(const PhiFunction& P, const PeriodicOrbit& attracting,
                                       const std::vector<int>& n_list, int n_grid, double half_width,
                                       unsigned threads) {
  if (n_grid < 2) throw std::invalid_argument("packet_shape: n_grid must be at least 2");
  const MirrorTrajectory& traj = P.map().trajectory();
  std::vector<ShapeProfile> out;
  for (int n : n_list) {
    const double t = n;
    const std::vector<double> xs = attracting_positions(traj, attracting, t);
    if (xs.empty()) throw std::runtime_error("packet_shape: no attracting characteristic in the cavity");
    ShapeProfile prof;
    prof.n = n;
    prof.x_star = xs.front();
    const double periods = t / static_cast<double>(attracting.p);
    const double stretch = std::pow(attracting.cumulative_doppler, periods);
    const double damp = 1.0 / (stretch * stretch);
    const double a = traj.position(t);
    std::vector<double> u(n_grid), v(n_grid);
    std::vector<char> inside(n_grid, 0);
    parallel_for(static_cast<std::size_t>(n_grid), threads, [&](std::size_t i) {
      u[i] = -half_width + 2.0 * half_width * static_cast<double>(i) / (n_grid - 1);
      const double x = prof.x_star + u[i] / stretch;
      if (x < 0.0 || x > a) return;
      inside[i] = 1;
      v[i] = damp * energy_density(P, t, x);
    });
    for (int i = 0; i < n_grid; ++i) {
      if (!inside[i]) continue;
      prof.x_rescaled.push_back(u[i]);
      prof.values.push_back(v[i]);
    }
    out.push_back(std::move(prof));
  }
  return out;
}

}  // namespace casimir
