#pragma once

#include <optional>
#include <vector>

#include "casimir/circle_map.hpp"
#include "casimir/moore.hpp"
#include "casimir/trajectory.hpp"

namespace casimir {

/// Φ(ξ) = S_Σ(ξ) + (2π²/σ²)Σ'(ξ)², the left/right-moving energy profile.
class PhiFunction {
 public:
  explicit PhiFunction(SigmaSolution sigma) : sigma_(std::move(sigma)) {}

  [[nodiscard]] const SigmaSolution& sigma_solution() const noexcept { return sigma_; }
  [[nodiscard]] double sigma() const noexcept { return sigma_.sigma(); }
  [[nodiscard]] const TimeAdvanceMap& map() const noexcept { return sigma_.map(); }
  [[nodiscard]] double operator()(double xi) const;

 private:
  SigmaSolution sigma_;
};

[[nodiscard]] double phi(const PhiFunction& P, double xi);

/// ⟨T00(t, x)⟩ = -(Φ(t+x) + Φ(t-x))/(24π). Throws DomainError unless 0 <= x <= a(t).
[[nodiscard]] double energy_density(const PhiFunction& P, double t, double x);

struct EnergyField {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> values;
};

/// Density on n_grid uniform points of [0, a(t)].
[[nodiscard]] EnergyField sample_energy(const PhiFunction& P, double t, int n_grid, unsigned threads = 1);

/// Φ(F^j(t)) = [Φ(t) - S_{F^j}(t)] / [(F^j)'(t)]², with S_{F^j} from the
/// cocycle sum. With `creation` off the Schwarzian source is dropped, which is
/// the classical transport law.
[[nodiscard]] double propagate_phi(const CircleLift& map, double phi_t, double t, int j, bool creation = true);

enum class Side { Left, Right };

/// Energy density emitted by a single mirror at emission time t_e, from the
/// closed form in a, a', a'', a'''.
[[nodiscard]] double emitted_density(const MirrorTrajectory& traj, double t_e, Side side);

/// The same quantity through the Schwarzian of F (right) or F⁻¹ (left).
[[nodiscard]] double emitted_density_from_map(const TimeAdvanceMap& map, double t_e, Side side);

/// Energy carried by one characteristic that leaves the stationary mirror at
/// t₊, followed through two moving-mirror reflections. Densities refer to the
/// single-characteristic component -Φ(ξ)/(24π).
struct DecompositionReport {
  double t_plus = 0.0;
  double doppler_first = 1.0;   ///< D(Θ(t₊)) = 1/F'(t₊)
  double doppler_second = 1.0;  ///< D(Θ(F(t₊))) = 1/F'(F(t₊))
  double initial = 0.0;         ///< -Φ(t₊)/(24π)
  double amplified_initial = 0.0;
  double first_creation = 0.0;   ///< created at Θ(t₊), amplified once
  double second_creation = 0.0;  ///< created at Θ(F(t₊))
  double sum = 0.0;
  double direct = 0.0;  ///< -Φ(F²(t₊))/(24π) from the Σ route
  double sum_relative_error = 0.0;
  double creation_factor = 0.0;      ///< S_F(t₊)/(24π F'(t₊)²)
  double left_emission = 0.0;        ///< -S_{F⁻¹}((Id+a)(Θ(t₊)))/(24π)
  double creation_identity_error = 0.0;  ///< |creation_factor - left_emission|
};

[[nodiscard]] DecompositionReport decompose_along_characteristic(const PhiFunction& P, double t_plus);

/// Φ(t* + np) = D^{2n}[Φ* - S_q Σ_{j<n} D^{-2j}] with the geometric sum in
/// closed form; D == 1 gives Φ* - n S_q.
[[nodiscard]] double resonant_phi(double phi_star, double doppler_q, double schwarzian_q, int n);

/// resonant_phi at the first point t* of an attracting orbit of `map`, with
/// 𝒟_q and S_{F^q}(t*) taken from the map.
[[nodiscard]] double resonant_asymptotics(const CircleLift& map, const PeriodicOrbit& orbit, double phi_star, int n);

struct Packet {
  double x_left = 0.0;
  double x_right = 0.0;
  double energy = 0.0;
  [[nodiscard]] double width() const { return x_right - x_left; }
};

struct PacketOptions {
  double threshold = 0.5;       ///< fraction of the peak deviation from the background
  double min_contrast = 10.0;   ///< below this peak/background ratio no packets are reported
  double energy_rel_tol = 1e-3;
  unsigned threads = 1;
};

struct PacketReport {
  double t = 0.0;
  double background = 0.0;  ///< median density
  double peak = 0.0;        ///< largest |density - background|
  bool no_packets = false;
  std::vector<Packet> packets;
  double total_energy = 0.0;  ///< sum of packet energies
  std::vector<double> predicted_x;  ///< attracting characteristics at time t
};

/// Packets of ⟨T00(t, ·)⟩: maximal runs of grid points whose deviation from
/// the median exceeds threshold·peak.
[[nodiscard]] PacketReport packet_analysis(const PhiFunction& P, const PeriodicOrbit& attracting, double t,
                                           int n_grid, const PacketOptions& options = {});

/// Positions x in [0, a(t)] of the attracting characteristics at time t.
[[nodiscard]] std::vector<double> attracting_positions(const MirrorTrajectory& traj, const PeriodicOrbit& attracting,
                                                       double t);

struct GrowthFit {
  double slope = 0.0;
  double expected_slope = 0.0;  ///< ln(𝒟_q)/p
  std::vector<double> times;
  std::vector<double> energies;
};

/// Least-squares slope of ln|E| against t, compared with ln(𝒟_q)/p.
[[nodiscard]] GrowthFit growth_fit(const std::vector<double>& times, const std::vector<double>& energies,
                                   double doppler_q, long p);

/// growth_fit of the packet energies at the given times.
[[nodiscard]] GrowthFit fit_growth(const PhiFunction& P, const PeriodicOrbit& attracting,
                                   const std::vector<double>& times, int n_grid, const PacketOptions& options = {});

struct ShapeProfile {
  int n = 0;
  double x_star = 0.0;
  std::vector<double> x_rescaled;  ///< 𝒟_q^{n/p}(x - x*)
  std::vector<double> values;      ///< 𝒟_q^{-2n/p} ⟨T00(n, x)⟩
};

/// Rescaled density around the attracting characteristic closest to x = 0,
/// on n_grid points of the rescaled window [-half_width, half_width].
[[nodiscard]] std::vector<ShapeProfile> packet_shape(const PhiFunction& P, const PeriodicOrbit& attracting,
                                                     const std::vector<int>& n_list, int n_grid,
                                                     double half_width = 0.3, unsigned threads = 1);

}  // namespace casimir
