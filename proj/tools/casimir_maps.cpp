// casimir_maps: command-line driver writing deterministic CSV tables.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "casimir/characteristics.hpp"
#include "casimir/circle_map.hpp"
#include "casimir/energy.hpp"
#include "casimir/errors.hpp"
#include "casimir/io.hpp"
#include "casimir/locking.hpp"
#include "casimir/moore.hpp"
#include "casimir/parallel.hpp"
#include "casimir/trajectory.hpp"

namespace {

using casimir::io::Config;
using casimir::io::CsvField;
using casimir::io::csv_line;

constexpr int kExitInvalid = 2;
constexpr int kExitNotLocked = 3;
constexpr int kExitBudget = 4;

struct Run {
  Config cfg;
  unsigned threads = 0;
  std::ostringstream out;

  void row(const std::vector<CsvField>& fields) { out << csv_line(fields) << '\n'; }
  void header(const char* text) { out << text << '\n'; }
};

casimir::TrajectoryParams trajectory_params(const Config& cfg, const char* default_family) {
  casimir::TrajectoryParams p;
  p.family = casimir::family_from_string(cfg.get_string("family", default_family));
  p.alpha = cfg.get_double("alpha", 0.34);
  p.beta = cfg.get_double("beta", 0.2);
  p.gamma = cfg.get_double("gamma", 0.3);
  return p;
}

int positive_int(const Config& cfg, const std::string& key, long fallback, long min = 2) {
  const long v = cfg.get_long(key, fallback);
  if (v < min || v > 100000000) {
    throw casimir::io::ConfigError(key + " must be an integer >= " + std::to_string(min));
  }
  return static_cast<int>(v);
}

std::string fmt(double v) { return casimir::io::format_number(v); }

// Locking of the periodic counterpart; exit 3 with the measured τ otherwise.
casimir::RotationNumberEstimate require_locked(const casimir::MirrorTrajectory& traj, long n_iters) {
  const casimir::TimeAdvanceMap periodic(traj.periodic_counterpart());
  const auto r = casimir::rotation_number(periodic, 0.0, n_iters);
  if (!r.locked()) {
    throw casimir::NotLocked("parameters are not phase locked: measured tau=" + fmt(r.value) +
                             " (error bound " + fmt(r.error_bound) + ")");
  }
  return r;
}

casimir::OrbitSearch locked_orbits(const casimir::MirrorTrajectory& traj, long n_iters) {
  const auto r = require_locked(traj, n_iters);
  const casimir::TimeAdvanceMap periodic(traj.periodic_counterpart());
  auto orbits = casimir::find_periodic_orbit(periodic, r.rational->first, r.rational->second);
  if (!orbits.attracting || !orbits.repelling) {
    throw casimir::NotLocked("no hyperbolic " + std::to_string(r.rational->first) + "/" +
                             std::to_string(r.rational->second) + " orbit pair at tau=" + fmt(r.value));
  }
  return orbits;
}

void cmd_rotation(Run& run) {
  const auto params = trajectory_params(run.cfg, "sine");
  const auto traj = casimir::make_trajectory(params);
  const long n_iters = run.cfg.get_long("n_iters", 10000);
  const double t0 = run.cfg.get_double("t0", 0.0);
  const casimir::TimeAdvanceMap map(traj.is_periodic() ? traj : traj.periodic_counterpart());
  const auto r = casimir::rotation_number(map, t0, n_iters);
  run.header("alpha,beta,gamma,tau,p,q,error_bound");
  CsvField p, q;
  if (r.locked()) {
    p = r.rational->first;
    q = r.rational->second;
  }
  run.row({params.alpha, params.beta, params.gamma, r.value, p, q, r.error_bound});
}

void cmd_staircase(Run& run) {
  const auto params = trajectory_params(run.cfg, "sine");
  const double lo = run.cfg.get_double("alpha_min", 0.2);
  const double hi = run.cfg.get_double("alpha_max", 0.7);
  const int n_points = positive_int(run.cfg, "n_points", 2000);
  casimir::StaircaseOptions opts;
  opts.n_iters = run.cfg.get_long("n_iters", 10000);
  opts.q_max = positive_int(run.cfg, "q_max", 64, 1);
  opts.threads = run.threads;
  int last_pct = -1;
  opts.progress = [&](std::size_t done, std::size_t total) {
    const int pct = static_cast<int>(100 * done / total);
    if (pct / 10 != last_pct / 10) {
      last_pct = pct;
      std::cerr << "staircase: " << done << "/" << total << '\n';
    }
  };
  const auto st = casimir::staircase(params.family, lo, hi, params.beta, params.gamma, n_points, opts);
  for (const auto& s : st.skipped) std::cerr << "staircase: skipped alpha=" << fmt(s.alpha) << ": " << s.reason << '\n';
  run.header("alpha,tau,locked_p,locked_q");
  for (const auto& pt : st.points) {
    CsvField p, q;
    if (pt.locked) {
      p = pt.locked->p;
      q = pt.locked->q;
    }
    run.row({pt.alpha, pt.tau, p, q});
  }
}

void cmd_tongues(Run& run) {
  const auto params = trajectory_params(run.cfg, "sine");
  const long p = run.cfg.get_long("p", 1);
  const long q = run.cfg.get_long("q", 3);
  const double lo = run.cfg.get_double("beta_min", 0.0);
  const double hi = run.cfg.get_double("beta_max", 0.5);
  const int n_beta = positive_int(run.cfg, "n_beta", 26);
  casimir::TongueOptions opts;
  opts.alpha_tol = run.cfg.get_double("alpha_tol", 1e-8);
  opts.threads = run.threads;
  std::cerr << "tongues: " << p << "/" << q << " at " << n_beta << " beta values\n";
  const auto tongue = casimir::tongue_region(params.family, p, q, lo, hi, params.gamma, n_beta, opts);
  run.header("beta,alpha_left,alpha_right,p,q");
  for (const auto& r : tongue.rows) {
    CsvField left, right;
    if (r.alpha) {
      left = r.alpha->first;
      right = r.alpha->second;
    }
    run.row({r.beta, left, right, p, q});
  }
}

casimir::SigmaSolution make_sigma(const Config& cfg) {
  const auto traj = casimir::make_trajectory(trajectory_params(cfg, "smoothed"));
  casimir::SigmaOptions opts;
  opts.pullback_limit = cfg.get_long("pullback_limit", opts.pullback_limit);
  opts.rotation_iters = cfg.get_long("n_iters", opts.rotation_iters);
  return casimir::build_sigma(traj, opts);
}

void cmd_sigma(Run& run) {
  const std::string what = run.cfg.get_string("what", "snapshot");
  const auto sigma = make_sigma(run.cfg);
  if (what == "snapshot") {
    const auto orbits = locked_orbits(sigma.map().trajectory(), run.cfg.get_long("n_iters", 10000));
    const int n = positive_int(run.cfg, "n", 25, 0);
    const int n_grid = positive_int(run.cfg, "n_grid", 1000);
    const int shift = static_cast<int>(run.cfg.get_long("shift", 0));
    const auto snap = casimir::sigma_snapshot(sigma, n, n_grid, *orbits.repelling, shift, run.threads);
    run.header("t,sigma_n");
    for (std::size_t i = 0; i < snap.grid.size(); ++i) run.row({snap.grid[i], snap.values[i]});
  } else if (what == "modes") {
    const int k = positive_int(run.cfg, "k", 1, 1);
    const int n_grid = positive_int(run.cfg, "n_grid", 200);
    run.header("t,x,re,im");
    for (double t : run.cfg.get_doubles("t", {2.0})) {
      const double a = sigma.map().trajectory().position(t);
      std::vector<std::complex<double>> v(n_grid);
      casimir::parallel_for(static_cast<std::size_t>(n_grid), run.threads, [&](std::size_t i) {
        v[i] = casimir::mode_function(sigma, k, t, a * static_cast<double>(i) / (n_grid - 1));
      });
      for (int i = 0; i < n_grid; ++i) {
        run.row({t, a * static_cast<double>(i) / (n_grid - 1), v[i].real(), v[i].imag()});
      }
    }
  } else {
    throw casimir::io::ConfigError("what must be snapshot or modes, got '" + what + "'");
  }
}

void cmd_energy(Run& run) {
  const casimir::PhiFunction P(make_sigma(run.cfg));
  const int n_grid = positive_int(run.cfg, "n_grid", 1000);
  run.header("t,x,T00");
  for (double t : run.cfg.get_doubles("t", {2.0})) {
    const auto field = casimir::sample_energy(P, t, n_grid, run.threads);
    for (std::size_t i = 0; i < field.x.size(); ++i) run.row({t, field.x[i], field.values[i]});
  }
}

void cmd_packets(Run& run) {
  const casimir::PhiFunction P(make_sigma(run.cfg));
  const auto orbits = locked_orbits(P.map().trajectory(), run.cfg.get_long("n_iters", 10000));
  const auto& attracting = *orbits.attracting;
  const std::string what = run.cfg.get_string("what", "packets");
  if (what == "shape") {
    std::vector<int> n_list;
    for (double n : run.cfg.get_doubles("n_list", {6, 9, 12})) {
      if (n < 0 || n != std::floor(n)) throw casimir::io::ConfigError("n_list entries must be non-negative integers");
      n_list.push_back(static_cast<int>(n));
    }
    const int n_grid = positive_int(run.cfg, "n_grid", 801);
    const double half_width = run.cfg.get_double("half_width", 0.3);
    const auto shapes = casimir::packet_shape(P, attracting, n_list, n_grid, half_width, run.threads);
    run.header("n,x_rescaled,T00_rescaled");
    for (const auto& s : shapes) {
      for (std::size_t i = 0; i < s.values.size(); ++i) run.row({static_cast<long>(s.n), s.x_rescaled[i], s.values[i]});
    }
    return;
  }
  if (what != "packets") throw casimir::io::ConfigError("what must be packets or shape, got '" + what + "'");

  casimir::PacketOptions opts;
  opts.threshold = run.cfg.get_double("threshold", opts.threshold);
  opts.min_contrast = run.cfg.get_double("min_contrast", opts.min_contrast);
  opts.threads = run.threads;
  const int n_grid = positive_int(run.cfg, "n_grid", 4000, 16);
  const auto times = run.cfg.get_doubles("t_list", {6, 7, 8, 9, 10, 11, 12, 13, 14});
  std::vector<double> energies;
  run.header("t,j,x_left,x_right,width,energy");
  for (double t : times) {
    std::cerr << "packets: t=" << fmt(t) << '\n';
    const auto rep = casimir::packet_analysis(P, attracting, t, n_grid, opts);
    if (rep.no_packets) std::cerr << "packets: no packets above contrast at t=" << fmt(t) << '\n';
    for (std::size_t j = 0; j < rep.packets.size(); ++j) {
      const auto& pk = rep.packets[j];
      run.row({t, static_cast<long>(j + 1), pk.x_left, pk.x_right, pk.width(), pk.energy});
    }
    energies.push_back(rep.total_energy);
  }
  run.out << '\n';
  run.header("slope,expected_slope");
  if (times.size() >= 2) {
    const auto fit = casimir::growth_fit(times, energies, attracting.cumulative_doppler, attracting.p);
    run.row({fit.slope, fit.expected_slope});
  } else {
    run.row({CsvField{}, std::log(attracting.cumulative_doppler) / static_cast<double>(attracting.p)});
  }
}

casimir::Direction parse_direction(const std::string& s) {
  if (s == "left") return casimir::Direction::Left;
  if (s == "right") return casimir::Direction::Right;
  throw casimir::io::ConfigError("direction must be left or right, got '" + s + "'");
}

void cmd_classical(Run& run) {
  const auto params = trajectory_params(run.cfg, "smoothed");
  const casimir::TimeAdvanceMap map(casimir::make_trajectory(params));
  const std::string what = run.cfg.get_string("what", "field");
  if (what == "events") {
    const double t0 = run.cfg.get_double("t0", 0.0);
    const double x0 = run.cfg.get_double("x0", params.alpha / 4.0);
    const double t_end = run.cfg.get_double("t_end", 5.0);
    const auto ch = casimir::trace(map, t0, x0, parse_direction(run.cfg.get_string("direction", "left")), t_end);
    run.header("k,time,mirror,n_plus,n_minus");
    for (std::size_t k = 0; k < ch.events.size(); ++k) {
      const auto& e = ch.events[k];
      run.row({static_cast<long>(k + 1), e.time, std::string(casimir::to_string(e.mirror)),
               static_cast<long>(e.n_plus), static_cast<long>(e.n_minus)});
    }
    return;
  }
  if (what != "field") throw casimir::io::ConfigError("what must be field or events, got '" + what + "'");

  const auto bump = casimir::gaussian_bump(run.cfg.get_double("bump_center", params.alpha / 4.0),
                                           run.cfg.get_double("bump_width", 0.02),
                                           run.cfg.get_double("bump_amplitude", 1.0));
  const auto zero = [](double) { return 0.0; };
  const std::string leg = run.cfg.get_string("bump_leg", "plus");
  casimir::ClassicalField field{zero, zero};
  if (leg == "plus" || leg == "both") field.psi_plus = bump;
  if (leg == "minus" || leg == "both") field.psi_minus = bump;
  if (leg != "plus" && leg != "minus" && leg != "both" && leg != "none") {
    throw casimir::io::ConfigError("bump_leg must be plus, minus, both or none, got '" + leg + "'");
  }
  const int n_grid = positive_int(run.cfg, "n_grid", 400);
  run.header("t,x,A");
  for (double t : run.cfg.get_doubles("t", {2.0})) {
    const double a = map.trajectory().position(t);
    std::vector<double> v(n_grid);
    casimir::parallel_for(static_cast<std::size_t>(n_grid), run.threads, [&](std::size_t i) {
      v[i] = casimir::classical_value(map, field, t, a * static_cast<double>(i) / (n_grid - 1));
    });
    for (int i = 0; i < n_grid; ++i) run.row({t, a * static_cast<double>(i) / (n_grid - 1), v[i]});
  }
}

int fail(int code, const std::string& what) {
  std::cerr << "casimir_maps: " << what << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circle-map numerics for a cavity with one periodically moving mirror"};
  app.set_version_flag("--version", std::string(CASIMIR_MAPS_VERSION));
  app.require_subcommand(1, 1);

  std::string config_path, out_path;
  std::optional<unsigned> threads;
  std::optional<std::string> alpha, beta, gamma;
  std::vector<std::string> sets;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"rotation", "rotation number of the time-advance map"},
      {"staircase", "tau(alpha) sweep with locked plateaus"},
      {"tongues", "locking tongue boundaries against beta"},
      {"sigma", "Moore solution snapshots or mode functions"},
      {"energy", "renormalized energy density T00(t, x)"},
      {"packets", "energy packets, growth fit and rescaled shapes"},
      {"classical", "classical field by characteristics, or reflection logs"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "output CSV path (stdout when omitted)");
    sub->add_option("--threads", threads, "worker threads (default: hardware count)");
    sub->add_option("--alpha", alpha, "override alpha");
    sub->add_option("--beta", beta, "override beta");
    sub->add_option("--gamma", gamma, "override gamma");
    sub->add_option("--set", sets, "override any config key (key=value)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  Run run;
  try {
    if (!config_path.empty()) run.cfg = Config::load(config_path);
    if (alpha) run.cfg.set("alpha", *alpha);
    if (beta) run.cfg.set("beta", *beta);
    if (gamma) run.cfg.set("gamma", *gamma);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw casimir::io::ConfigError("--set expects key=value, got '" + kv + "'");
      run.cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    run.cfg.set("command", command);
    run.threads = threads ? *threads : casimir::default_threads();
    if (run.threads == 0) run.threads = casimir::default_threads();
    run.out << casimir::io::provenance_line(run.cfg.canonical()) << '\n';

    if (command == "rotation") cmd_rotation(run);
    else if (command == "staircase") cmd_staircase(run);
    else if (command == "tongues") cmd_tongues(run);
    else if (command == "sigma") cmd_sigma(run);
    else if (command == "energy") cmd_energy(run);
    else if (command == "packets") cmd_packets(run);
    else cmd_classical(run);
  } catch (const casimir::PullbackOverflow& e) {
    return fail(kExitBudget, std::string(e.what()) + " (t=" + fmt(e.where()) + ")");
  } catch (const casimir::ConvergenceFailure& e) {
    return fail(kExitBudget, e.what());
  } catch (const casimir::NotLocked& e) {
    return fail(kExitNotLocked, e.what());
  } catch (const casimir::DomainError& e) {
    return fail(kExitInvalid, e.what());
  } catch (const std::invalid_argument& e) {
    // ConstraintViolation and ConfigError land here too.
    return fail(kExitInvalid, e.what());
  } catch (const std::exception& e) {
    return fail(1, e.what());
  }

  const std::string text = run.out.str();
  if (out_path.empty()) {
    std::cout << text << std::flush;
    return 0;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f || !(f << text) || !f.flush()) return fail(kExitInvalid, "cannot write " + out_path);
  return 0;
}
