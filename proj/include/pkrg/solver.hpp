#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pkrg/spectral_field.hpp"

namespace pkrg {

enum class DealiasRule { two_thirds, padded };
enum class TimeScheme { integrating_factor_rk4, imex_euler };
enum class InitialConditionKind { taylor_green, random_band, checkpoint };

struct BlowUpError : std::runtime_error {
  BlowUpError(Real time, int band, const std::string& what)
      : std::runtime_error(what), time(time), band(band) {}
  Real time;
  int band;
};

struct SolverConfig {
  Real alpha = 1.1;  // dissipation exponent, (1, 3/2]
  int n = 64;
  Real period = 1.0;
  Real dt = 1e-3;
  Real t_end = 0.1;
  DealiasRule dealias = DealiasRule::two_thirds;
  TimeScheme scheme = TimeScheme::integrating_factor_rk4;
  std::uint64_t seed = 1;
  InitialConditionKind ic = InitialConditionKind::taylor_green;
  std::string checkpoint_path;        // ic = checkpoint
  Real band_lo = 1.5, band_hi = 6.0;  // ic = random_band: shell (band_lo, band_hi) in |xi|
  int snapshot_every = 20;            // steps between stored snapshots
  Real blowup_ceiling = 1e6;          // ceiling on sum_k |c_k| (bounds the sup norm)

  // IMEX-Euler treats dissipation implicitly, so this guards the accuracy of
  // the energy ledger rather than stability.
  static constexpr Real kImexStiffnessCap = 1e5;

  void validate() const;  // throws std::invalid_argument with the failing field
};

struct EnergySample {
  Real time;
  Real energy;       // ||u(t)||^2
  Real dissipation;  // cumulative integral of ||(-Lap)^{alpha/2} u||^2 from 0
};

struct Trajectory {
  SolverConfig cfg;
  std::vector<std::pair<Real, SpectralField>> snapshots;
  std::vector<EnergySample> energy;            // one sample per step
  std::vector<std::pair<Real, Real>> sup_series;  // (time, grid sup norm) at snapshots
};

/// Called after the initial state (step 0) and after every accepted step.
class StepObserver {
 public:
  virtual ~StepObserver() = default;
  virtual void observe(int step, Real time, const SpectralField& u) = 0;
};

SpectralField taylor_green_field(const FrequencyGrid& grid);
SpectralField initial_condition(const SolverConfig& cfg);

/// -T[(u.grad)u] in divergence form, dealiased per rule, Nyquist-zeroed.
SpectralField nonlinear_term(const SpectralField& u, DealiasRule rule);

/// One time step. Pre: u divergence-free and dealiased. Throws BlowUpError on
/// non-finite coefficients or amplitude-sum above cfg.blowup_ceiling.
SpectralField step(const SpectralField& u, const SolverConfig& cfg);

Trajectory run(const SolverConfig& cfg, StepObserver* observer = nullptr);

struct EnergyReport {
  Real worst_defect = 0;  // max over step pairs s < t of the inequality defect
  Real at_s = 0, at_t = 0;
};

/// Energy-inequality audit: defect(s,t) = E(t)/2 + D(t) - D(s) - E(s)/2 must
/// stay <= quadrature tolerance for every pair s < t.
EnergyReport energy_check(const Trajectory& tr);

/// Grid sup norm of the velocity (exact transform, no oversampling).
Real sup_norm(const SpectralField& u);

}  // namespace pkrg
