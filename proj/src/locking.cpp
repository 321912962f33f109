#include "casimir/locking.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "casimir/errors.hpp"
#include "casimir/parallel.hpp"
#include "casimir/root_finding.hpp"

namespace casimir {
namespace {

constexpr double kZeroBand = 1e-12;
constexpr int kMaxRefined = 8;

void require_coprime(long p, long q) {
  if (q < 1 || std::gcd(p, q) != 1) throw std::invalid_argument("p and q must be coprime with q >= 1");
}

}  // namespace

const char* to_string(LockState s) {
  switch (s) {
    case LockState::Below: return "below";
    case LockState::Locked: return "locked";
    default: return "above";
  }
}

LockState classify_locking(const CircleLift& map, long p, long q) {
  require_coprime(p, q);
  if (!map.is_lift()) throw std::invalid_argument("classify_locking: map is not a periodic lift");
  const int n = std::max<int>(1024, static_cast<int>(64 * q));
  std::vector<double> g(n);
  bool pos = false;
  bool neg = false;
  for (int i = 0; i < n; ++i) {
    g[i] = periodicity_defect(map, static_cast<double>(i) / n, p, q).first;
    if (std::abs(g[i]) <= kZeroBand) return LockState::Locked;
    (g[i] > 0 ? pos : neg) = true;
    if (pos && neg) return LockState::Locked;
  }

  // One-signed on the grid: polish the deepest local minima of |g|.
  const double sign = pos ? 1.0 : -1.0;
  std::vector<int> minima;
  for (int i = 0; i < n; ++i) {
    const double h = sign * g[i];
    if (h <= sign * g[(i + n - 1) % n] && h <= sign * g[(i + 1) % n]) minima.push_back(i);
  }
  std::sort(minima.begin(), minima.end(), [&](int a, int b) { return sign * g[a] < sign * g[b]; });
  if (minima.size() > kMaxRefined) minima.resize(kMaxRefined);
  auto h = [&](double t) { return sign * periodicity_defect(map, t, p, q).first; };
  for (int i : minima) {
    const double lo = static_cast<double>(i - 1) / n;
    const double hi = static_cast<double>(i + 1) / n;
    if (roots::golden_minimize(h, lo, hi, 1e-13).second <= kZeroBand) return LockState::Locked;
  }
  return pos ? LockState::Above : LockState::Below;
}

bool locking_test(const CircleLift& map, long p, long q) {
  return classify_locking(map, p, q) == LockState::Locked;
}

TimeAdvanceMap locking_map(double alpha, double beta, double gamma) {
  return TimeAdvanceMap(make_sine({TrajectoryFamily::Sine, alpha, beta, gamma}));
}

// ---------------------------------------------------------------------------
// Staircase

std::vector<Plateau> Staircase::plateaus() const {
  std::vector<Plateau> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const StaircasePoint& pt = points[i];
    if (!pt.locked) continue;
    const bool continues = i > 0 && points[i - 1].locked && *points[i - 1].locked == *pt.locked;
    if (continues) {
      out.back().alpha_last = pt.alpha;
      ++out.back().n_samples;
    } else {
      out.push_back({*pt.locked, pt.alpha, pt.alpha, 1});
    }
  }
  return out;
}

double Staircase::max_monotonicity_violation() const {
  double worst = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    worst = std::max(worst, points[i - 1].tau - points[i].tau);
  }
  return worst;
}

namespace {

StaircasePoint staircase_point(double alpha, double beta, double gamma, const StaircaseOptions& options) {
  const TimeAdvanceMap map = locking_map(alpha, beta, gamma);
  const RotationNumberEstimate r = rotation_number(map, 0.0, options.n_iters, 1e-9, options.q_max);
  StaircasePoint pt{alpha, r.value, r.error_bound, std::nullopt};
  if (r.locked()) {
    pt.locked = Rational{r.rational->first, r.rational->second};
    return pt;
  }
  if (r.rational) return pt;  // rigid rotation by a rational angle
  // The orbit may converge too slowly near a tongue edge for the snap to
  // trigger; test the convergents compatible with the estimate directly.
  for (const auto& [p, q] : convergents(r.value, options.q_max)) {
    if (q < 2 && beta != 0.0) continue;
    if (std::abs(r.value - static_cast<double>(p) / q) > r.error_bound) continue;
    if (beta != 0.0 && locking_test(map, p, q)) {
      pt.locked = Rational{p % q, q};
      pt.tau = static_cast<double>(p % q) / q;
      return pt;
    }
  }
  return pt;
}

}  // namespace

Staircase staircase(TrajectoryFamily /*family*/, double alpha_lo, double alpha_hi, double beta, double gamma,
                    int n_points, const StaircaseOptions& options) {
  if (n_points < 2) throw std::invalid_argument("staircase: n_points must be at least 2");
  if (!(alpha_hi > alpha_lo)) throw std::invalid_argument("staircase: empty alpha range");
  struct Slot {
    std::optional<StaircasePoint> point;
    std::string error;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(n_points));
  std::atomic<std::size_t> done{0};
  parallel_for(slots.size(), options.threads, [&](std::size_t i) {
    const double alpha = alpha_lo + (alpha_hi - alpha_lo) * static_cast<double>(i) / (n_points - 1);
    try {
      slots[i].point = staircase_point(alpha, beta, gamma, options);
    } catch (const ConstraintViolation& e) {
      slots[i].error = e.what();
    }
    const std::size_t k = ++done;
    if (options.progress) options.progress(k, slots.size());
  });

  Staircase out;
  out.beta = beta;
  out.gamma = gamma;
  out.n_iters = options.n_iters;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].point) {
      out.points.push_back(*slots[i].point);
    } else {
      const double alpha = alpha_lo + (alpha_hi - alpha_lo) * static_cast<double>(i) / (n_points - 1);
      out.skipped.push_back({alpha, slots[i].error});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tongues

std::pair<double, double> tongue_boundary(TrajectoryFamily /*family*/, long p, long q, double beta, double gamma,
                                          std::optional<std::pair<double, double>> alpha_bracket,
                                          const TongueOptions& options) {
  require_coprime(p, q);
  const double center = static_cast<double>(p) / q;
  auto [lo, hi] = alpha_bracket.value_or(std::pair{center - 0.15, center + 0.15});
  // α must keep the cavity open and shorter than 1/2 throughout the motion.
  const double margin = std::abs(beta) / std::numbers::pi;
  lo = std::max(lo, margin + 1e-9);
  hi = std::min(hi, 1.0 - margin - 1e-6);
  if (!(hi > lo)) throw NotLocked("tongue_boundary: empty alpha bracket");
  if (beta == 0.0) {
    // A rigid rotation locks only at α = p/q exactly.
    if (center < lo || center > hi) throw NotLocked("tongue_boundary: p/q outside the alpha bracket");
    return {center, center};
  }
  check_constraints({TrajectoryFamily::Sine, 0.5 * (lo + hi), beta, gamma});

  auto cls = [&](double alpha) { return classify_locking(locking_map(alpha, beta, gamma), p, q); };
  double below = lo;  // largest α known Below (or the bracket edge)
  double above = hi;  // smallest α known Above
  std::optional<double> locked;
  const LockState c_lo = cls(lo);
  const LockState c_hi = cls(hi);
  if (c_lo == LockState::Above || c_hi == LockState::Below) {
    throw NotLocked("tongue_boundary: p/q tongue not inside the alpha bracket");
  }
  if (c_lo == LockState::Locked) locked = lo;
  if (!locked && c_hi == LockState::Locked) locked = hi;
  // Thin tongues: bisect on the ordering Below < Locked < Above until a
  // locked α turns up or the interval reaches double resolution.
  while (!locked) {
    const double mid = 0.5 * (below + above);
    if (!(mid > below && mid < above)) {
      throw NotLocked("tongue_boundary: no locked alpha for p/q=" + std::to_string(p) + "/" + std::to_string(q) +
                      " at beta=" + std::to_string(beta));
    }
    const LockState c = cls(mid);
    if (c == LockState::Locked) {
      locked = mid;
    } else if (c == LockState::Below) {
      below = mid;
    } else {
      above = mid;
    }
  }

  double left = *locked;
  if (c_lo != LockState::Locked) {
    double l = below;
    double r = *locked;
    while (r - l > options.alpha_tol) {
      const double mid = 0.5 * (l + r);
      if (mid <= l || mid >= r) break;
      (cls(mid) == LockState::Locked ? r : l) = mid;
    }
    left = r;
  } else {
    left = lo;
  }
  double right = *locked;
  if (c_hi != LockState::Locked) {
    double l = *locked;
    double r = above;
    while (r - l > options.alpha_tol) {
      const double mid = 0.5 * (l + r);
      if (mid <= l || mid >= r) break;
      (cls(mid) == LockState::Locked ? l : r) = mid;
    }
    right = l;
  } else {
    right = hi;
  }
  return {left, right};
}

bool Tongue::widths_nondecreasing() const {
  double prev = -1.0;
  for (const TongueRow& row : rows) {
    if (!row.alpha) continue;
    if (row.width() < prev) return false;
    prev = row.width();
  }
  return true;
}

Tongue tongue_region(TrajectoryFamily family, long p, long q, double beta_lo, double beta_hi, double gamma,
                     int n_beta, const TongueOptions& options) {
  if (n_beta < 2) throw std::invalid_argument("tongue_region: n_beta must be at least 2");
  require_coprime(p, q);
  Tongue out{p, q, std::vector<TongueRow>(static_cast<std::size_t>(n_beta))};
  TongueOptions inner = options;
  inner.threads = 1;
  parallel_for(out.rows.size(), options.threads, [&](std::size_t i) {
    const double beta = beta_lo + (beta_hi - beta_lo) * static_cast<double>(i) / (n_beta - 1);
    out.rows[i].beta = beta;
    try {
      out.rows[i].alpha = tongue_boundary(family, p, q, beta, gamma, std::nullopt, inner);
    } catch (const NotLocked&) {
    }
  });
  return out;
}

}  // namespace casimir
