// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "casimir/characteristics.hpp"
#include "casimir/energy.hpp"
#include "casimir/locking.hpp"
#include "casimir/moore.hpp"

using namespace casimir;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

MirrorTrajectory smoothed(double a, double b, double g) {
  return make_smoothed_start({TrajectoryFamily::SmoothedStart, a, b, g});
}

TimeAdvanceMap sine_map(double a, double b, double g) {
  return TimeAdvanceMap(make_sine({TrajectoryFamily::Sine, a, b, g}));
}

const PhiFunction& reference_phi() {
  static const PhiFunction P(build_sigma(smoothed(0.34, 0.2, 0.3)));
  return P;
}

const PeriodicOrbit& reference_attracting() {
  static const PeriodicOrbit o = *find_periodic_orbit(sine_map(0.34, 0.2, 0.3), 1, 3).attracting;
  return o;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

void criterion_1(Outcome& o) {
  const auto m = sine_map(0.34, 0.2, 0.3);
  const auto r = rotation_number(m);
  const auto orbits = find_periodic_orbit(m, 1, 3);
  o.require(r.locked() && r.rational == std::pair<long, long>{1, 3}, "rotation number snapped to 1/3");
  o.require(r.value == 1.0 / 3.0, "tau == 1/3");
  o.require(r.error_bound < 1e-9, "periodicity residual < 1e-9");
  o.require(orbits.attracting.has_value(), "attracting 3-orbit exists");
  if (orbits.attracting) {
    o.require(orbits.attracting->multiplier < 1.0, "multiplier < 1");
    o.require(orbits.attracting->residual < 1e-9, "orbit residual < 1e-9");
    o.detail << "tau=" << r.value << " residual=" << r.error_bound
             << " multiplier=" << orbits.attracting->multiplier;
  }
}

void criterion_2(Outcome& o) {
  const auto st = staircase(TrajectoryFamily::Sine, 0.2, 0.7, 0.4, 0.7, 2000);
  o.require(st.points.size() == 2000, "all 2000 points evaluated");
  const auto plateaus = st.plateaus();
  for (auto [p, q] : std::vector<std::pair<long, long>>{{1, 4}, {1, 3}, {2, 5}, {9, 20}, {3, 5}, {2, 3}}) {
    double width = 0.0;
    for (const auto& pl : plateaus) {
      if (pl.ratio == Rational{p, q}) width = std::max(width, pl.width());
    }
    o.detail << p << "/" << q << " width=" << width << " ";
    o.require(width > 0.0, "plateau " + std::to_string(p) + "/" + std::to_string(q));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < st.points.size(); ++i) {
    const auto& a = st.points[i];
    const auto& b = st.points[i + 1];
    const double allowed = 2.0 * std::max(a.error_bound, b.error_bound);
    worst = std::max(worst, (a.tau - b.tau) - allowed);
  }
  o.detail << "max excess drop=" << std::max(worst, 0.0);
  o.require(worst <= 0.0, "monotone within 2x estimator error");
}

void criterion_3(Outcome& o) {
  for (auto [p, q] : std::vector<std::pair<long, long>>{{1, 3}, {2, 5}}) {
    const double r = static_cast<double>(p) / q;
    const std::string name = std::to_string(p) + "/" + std::to_string(q);
    const auto [lo, hi] = tongue_boundary(TrajectoryFamily::Sine, p, q, 1e-4, 0.7);
    o.require(std::abs(lo - r) < 1e-3 && std::abs(hi - r) < 1e-3, name + " emanates from p/q");
    const auto [lo5, hi5] = tongue_boundary(TrajectoryFamily::Sine, p, q, 0.05, 0.7);
    const auto [lo30, hi30] = tongue_boundary(TrajectoryFamily::Sine, p, q, 0.3, 0.7);
    o.require(hi30 - lo30 > hi5 - lo5, name + " widens with beta");
    o.detail << name << ": [" << lo << ", " << hi << "] w(0.05)=" << hi5 - lo5 << " w(0.3)=" << hi30 - lo30
             << "; ";
  }
}

void criterion_4(Outcome& o) {
  const double alpha = 0.35, L = alpha / 2;
  const PhiFunction P(build_sigma(smoothed(alpha, 0.0, 0.0)));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ut(0.0, 20.0), ux(0.0, L);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) worst = std::max(worst, rel(energy_density(P, ut(rng), ux(rng)), -kPi / (24 * L * L)));
  o.detail << "max relative error=" << worst;
  o.require(worst < 1e-10, "static density to 1e-10");
}

void criterion_5(Outcome& o) {
  const auto& P = reference_phi();
  const auto& s = P.sigma_solution();
  const auto& m = P.map();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  double moore = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = 30.0 * u01(rng);
    moore = std::max(moore, std::abs(s.value(m.advance(t)) - s.value(t) - s.sigma()));
  }
  o.require(moore < 1e-10, "(a) Moore residual");

  // S of a composition G∘H is S_G(H)·H'² + S_H.
  const auto composed = [](const Jet& g_at_h, const Jet& h) { return schwarzian(g_at_h) * h.d1 * h.d1 + schwarzian(h); };
  const auto id_plus = [](const MirrorTrajectory& tr, double t, double sign) {
    const Jet a = tr.eval(t);
    return Jet{t + sign * a.value, 1 + sign * a.d1, sign * a.d2, sign * a.d3};
  };
  const auto pm = sine_map(0.35, 0.4, 0.7);
  double schw = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = u01(rng);
    const Jet th = pm.theta_jet(t);
    schw = std::max(schw, rel(composed(id_plus(pm.trajectory(), th.value, +1), th), schwarzian_of_map(pm, t)));
    const Jet f = pm.advance_jet(t);
    schw = std::max(schw, rel(composed(pm.advance_jet(f.value), f), schwarzian_of_iterate(pm, t, 2)));
    const Jet tt = pm.theta_tilde_jet(t);
    schw = std::max(schw, rel(composed(id_plus(pm.trajectory(), tt.value, -1), tt), schwarzian(pm.inverse_jet(t))));
  }
  o.require(schw < 1e-8, "(b) Schwarzian composition");

  double prop = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double t = 3.0 * u01(rng);
    double ft = t;
    for (int j = 1; j <= 10; ++j) {
      ft = m.advance(ft);
      prop = std::max(prop, rel(propagate_phi(m, P(t), t, j), P(ft)));
    }
  }
  o.require(prop < 1e-7, "(c) phi propagation");

  double creation = 0.0;
  for (int i = 0; i < 100; ++i) {
    creation = std::max(creation, decompose_along_characteristic(P, 6.0 * u01(rng)).creation_identity_error);
  }
  o.require(creation < 1e-8, "(d) creation-term identity");
  o.detail << "moore=" << moore << " schwarzian=" << schw << " propagation=" << prop << " creation=" << creation;
}

void criterion_6(Outcome& o) {
  const auto& P = reference_phi();
  const auto& at = reference_attracting();
  const auto fit = fit_growth(P, at, {6, 7, 8, 9, 10, 11, 12, 13, 14}, 4000);
  const double err = rel(fit.slope, fit.expected_slope);
  o.detail << "slope=" << fit.slope << " expected=" << fit.expected_slope << " rel.err=" << err;
  o.require(err < 0.05, "growth slope within 5%");
  const auto rep = packet_analysis(P, at, 12.0, 4000);
  o.detail << " packets(t=12)=" << rep.packets.size();
  o.require(rep.packets.size() == 3, "exactly 3 packets at t=12");
}

void criterion_7(Outcome& o) {
  const auto& P = reference_phi();
  const auto& at = reference_attracting();
  const double expected = 1.0 / at.cumulative_doppler;
  double worst = 0.0;
  for (double t = 8.0; t <= 13.0; t += 1.0) {
    const auto a = packet_analysis(P, at, t, 4000);
    const auto b = packet_analysis(P, at, t + 1.0, 4000);
    if (a.packets.empty() || a.packets.size() != b.packets.size()) {
      o.require(false, "matching packets at t=" + std::to_string(t));
      continue;
    }
    for (std::size_t j = 0; j < a.packets.size(); ++j) {
      worst = std::max(worst, rel(b.packets[j].width() / a.packets[j].width(), expected));
    }
  }
  o.detail << "width ratio max rel.err=" << worst;
  o.require(worst < 0.15, "width ratio within 15%");

  const auto shapes = packet_shape(P, at, {9, 12}, 401);
  double diff = 0.0, peak = 0.0;
  const std::size_t n = std::min(shapes[0].values.size(), shapes[1].values.size());
  for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(shapes[0].values[i] - shapes[1].values[i]));
  for (double v : shapes[1].values) peak = std::max(peak, std::abs(v));
  o.detail << " shape sup-diff/peak=" << diff / peak;
  o.require(diff < 0.1 * peak, "shapes at n=9 and n=12 within 10%");
}

void criterion_8(Outcome& o) {
  const auto m = sine_map(0.34, 0.2, 0.3);
  PeriodicOrbit forced = reference_attracting();
  forced.cumulative_doppler = 1.0;
  const double t_star = forced.points.front();
  const double s_q = schwarzian_of_iterate(m, t_star, static_cast<int>(forced.q));
  const double phi_star = reference_phi()(t_star);
  int mismatches = 0;
  for (int n = 0; n <= 50; ++n) {
    if (resonant_asymptotics(m, forced, phi_star, n) != phi_star - n * s_q) ++mismatches;
  }
  o.detail << "mismatches=" << mismatches << " of 51";
  o.require(mismatches == 0, "exact linear growth");
}

void criterion_9(Outcome& o) {
  const TimeAdvanceMap m(smoothed(0.34, 0.2, 0.3));
  const auto zero = [](double) { return 0.0; };
  const ClassicalField f{zero, zero};
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double classical = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = 20.0 * u01(rng);
    classical = std::max(classical, std::abs(classical_value(m, f, t, u01(rng) * m.trajectory().position(t))));
  }
  o.require(classical == 0.0, "classical zero field stays zero");

  const auto field = sample_energy(reference_phi(), 2.0, 400);
  const double L = 0.17;
  const double stat = -kPi / (24 * L * L);
  double dev = 0.0;
  for (double v : field.values) dev = std::max(dev, rel(v, stat));
  o.detail << "classical max=" << classical << " quantum max rel.dev at t=2: " << dev;
  o.require(dev > 10 * 1e-7, "quantum deviation exceeds 10x identity tolerance");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double budget_s;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, 1, criterion_1},   {2, 120, criterion_2}, {3, 120, criterion_3},
      {4, 1, criterion_4},   {5, 30, criterion_5},  {6, 300, criterion_6},
      {7, 300, criterion_7}, {8, 1, criterion_8},   {9, 10, criterion_9},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(elapsed < c.budget_s, "runtime budget " + std::to_string(c.budget_s) + " s");
    if (!o.pass) ++failed;
    std::printf("%s criterion %d: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, o.detail.str().c_str(), elapsed);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
