#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "casimir/circle_map.hpp"
#include "casimir/trajectory.hpp"

namespace casimir {

struct Rational {
  long p = 0;
  long q = 1;
  [[nodiscard]] double value() const { return static_cast<double>(p) / static_cast<double>(q); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Position of the parameters relative to the p/q tongue.
enum class LockState {
  Below,   ///< F^q(t) < t + p everywhere: τ < p/q
  Locked,  ///< F^q(t) - t - p has a zero
  Above,   ///< F^q(t) > t + p everywhere: τ > p/q
};

[[nodiscard]] const char* to_string(LockState s);

/// Sign analysis of g(t) = F^q(t) - t - p on max(1024, 64q) grid points.
/// Values with |g| <= 1e-12 count as zeros; when every sample has the same
/// sign, the extreme local minima of |g| are refined by golden-section search
/// so that nearly tangent roots are not missed.
[[nodiscard]] LockState classify_locking(const CircleLift& map, long p, long q);

/// True iff F^q(t) = t + p has a solution. Requires gcd(p, q) = 1.
[[nodiscard]] bool locking_test(const CircleLift& map, long p, long q);

/// Periodic Sine map at the given parameters; the locking structure of a
/// SmoothedStart motion is that of its periodic counterpart.
[[nodiscard]] TimeAdvanceMap locking_map(double alpha, double beta, double gamma);

struct StaircasePoint {
  double alpha = 0.0;
  double tau = 0.0;
  double error_bound = 0.0;
  std::optional<Rational> locked;
};

struct SkippedPoint {
  double alpha = 0.0;
  std::string reason;
};

struct Plateau {
  Rational ratio;
  double alpha_first = 0.0;  ///< first sample on the plateau
  double alpha_last = 0.0;   ///< last sample on the plateau
  int n_samples = 0;
  [[nodiscard]] double width() const { return alpha_last - alpha_first; }
};

struct StaircaseOptions {
  long n_iters = 10000;
  unsigned threads = 0;  ///< 0: hardware concurrency
  int q_max = 64;
  /// Called from worker threads with the number of finished points.
  std::function<void(std::size_t done, std::size_t total)> progress;
};

struct Staircase {
  double beta = 0.0;
  double gamma = 0.0;
  long n_iters = 0;
  std::vector<StaircasePoint> points;
  std::vector<SkippedPoint> skipped;

  /// Maximal runs of consecutive samples locked to the same p/q.
  [[nodiscard]] std::vector<Plateau> plateaus() const;
  /// Largest drop τ(α_i) - τ(α_{i+1}) between consecutive points (0 if monotone).
  [[nodiscard]] double max_monotonicity_violation() const;
};

/// τ(α) on n_points uniformly spaced α in [alpha_lo, alpha_hi]. Parameter sets
/// that fail validation are skipped and listed. Output order is the α order
/// for any thread count.
[[nodiscard]] Staircase staircase(TrajectoryFamily family, double alpha_lo, double alpha_hi, double beta,
                                  double gamma, int n_points, const StaircaseOptions& options = {});

struct TongueOptions {
  double alpha_tol = 1e-8;
  unsigned threads = 0;
};

/// α-interval of the p/q tongue at fixed (β, γ) inside `alpha_bracket`
/// (defaults to p/q ± 0.15, clipped to valid parameters). Each edge is located
/// by bisection to alpha_tol and reported on its locked side. Throws NotLocked
/// when no locked α exists in the bracket.
[[nodiscard]] std::pair<double, double> tongue_boundary(
    TrajectoryFamily family, long p, long q, double beta, double gamma,
    std::optional<std::pair<double, double>> alpha_bracket = std::nullopt, const TongueOptions& options = {});

struct TongueRow {
  double beta = 0.0;
  std::optional<std::pair<double, double>> alpha;  ///< empty when not locked at this β
  [[nodiscard]] double width() const { return alpha ? alpha->second - alpha->first : 0.0; }
};

struct Tongue {
  long p = 0;
  long q = 1;
  std::vector<TongueRow> rows;
  /// True when the widths never decrease with β across the locked rows.
  [[nodiscard]] bool widths_nondecreasing() const;
};

/// Tongue boundaries at n_beta uniformly spaced β in [beta_lo, beta_hi].
[[nodiscard]] Tongue tongue_region(TrajectoryFamily family, long p, long q, double beta_lo, double beta_hi,
                                   double gamma, int n_beta, const TongueOptions& options = {});

}  // namespace casimir
