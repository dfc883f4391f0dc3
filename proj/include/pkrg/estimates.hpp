#pragma once

#include <map>
#include <optional>
#include <vector>

#include "pkrg/cutoff.hpp"
#include "pkrg/packets.hpp"
#include "pkrg/solver.hpp"

namespace pkrg {

/// theta = 2(2 alpha - 1 - eps)/3, so that 3 theta/2 = 2 alpha - 1 - eps
/// exactly. Separates the very-low bands (absorbed into e_vl) from the low
/// bands that enter G_low_loc.
Real theta(Real alpha, Real epsilon);

/// Every term of the packet-energy budget at one (time, cube, band):
///   d/dt u_{Q,j}^2 = 2(I + J), and the budget terms
///   G_diss    = 2^{2 alpha j} u_{Q,j}^2
///   G_low_loc = u_{Q,j} u_{3Q/2,j+-2} sum_{theta j <= k <= j-5} 2^{j+3k/2} u_{Q_k,k}
///   G_loc     = 2^{5j/2} u_{Q,j} u_{3Q/2,j+-4}^2
///   G_hh      = u_{Q,j} sum_{k >= j+1} 2^{3j/2+k} u_{3Q/2,k}^2
///   e_diss    = 2^{2 alpha j} (d 2^j)^{-1} u_{3Q/2,j+-2}^2
///   e_vl      = 2^{2 alpha j} 2^{-eps j} u_{3Q/2,j+-2}^2
/// with every unspecified constant set to 1; the comparison constant of the
/// budget inequality is reported as data (measured_c), never asserted.
struct EstimateTerms {
  Real time = 0;
  std::string cube_id;
  int j = 0;
  Real I = 0;  // dissipation flux
  Real J = 0;  // nonlinear flux
  Real G_diss = 0, G_low_loc = 0, G_loc = 0, G_hh = 0;
  Real e_diss = 0, e_vl = 0;
  Real theta = 0;
  Real lhs_rate = std::numeric_limits<Real>::quiet_NaN();  // d/dt u_{Q,j}^2 when available
  Real measured_c = std::numeric_limits<Real>::quiet_NaN();  // J / (G_low_loc+G_loc+G_hh)
  bool bands_clipped = false;  // some window hit the resolved-band ceiling
  bool smallness_waived = false;  // 2^{eps j} >= 16 does not hold at this j
};

struct EstimateConfig {
  Real alpha = 1.1;
  Real epsilon = 0.01;
  DealiasRule dealias = DealiasRule::two_thirds;
};

/// I = -<(-Lap)^alpha u, P_j(phi^2 P_j u)>, J = <-T[(u.grad)u], P_j(phi^2 P_j u)>.
/// Along the semidiscrete flow, d/dt u_{Q,j}^2 = 2(I + J) exactly; time
/// discretization is the only error source. J uses the same dealiasing rule
/// as the stepping scheme so the identity closes on computed trajectories.
std::pair<Real, Real> flux_identity(const SpectralField& u, const Cube& q, int j, Real alpha,
                                    DealiasRule dealias = DealiasRule::two_thirds);

EstimateTerms estimate_terms(const SpectralField& u, const Cube& q, int j,
                             const EstimateConfig& cfg);

// --- regularity weights -------------------------------------------------------

struct BarrierResult;  // covering.hpp

struct RegularityWeights {
  Cube cube;
  int delta = 0;  // smallest k >= 0 with Q_{j-k} touching the barrier surface
  Real rho = 0;   // 5 - 4 alpha + min(10, eps delta / 10)
};

/// delta by exact wrapped cube-surface intersection against the barrier shell
/// boundary(r Q_{j1}(x)); throws std::domain_error when the cube lies outside
/// the barrier region.
RegularityWeights regularity_weights(const Cube& q, const BarrierResult& barrier, Real alpha);

/// The closed-form weight, exposed for the threshold arithmetic tests.
Real regularity_rho(Real alpha, Real epsilon, int delta);

// --- flux probe along a run ---------------------------------------------------

/// Records packet series for a set of (cube, band) pairs at every step and,
/// at selected center steps, Richardson-extrapolated rates of u_{Q,j}^2
/// against 2(I+J).
class FluxProbe : public StepObserver {
 public:
  struct Sample {
    Cube cube;
    int band = 0;
    Real time = 0;
    Real rate = 0;      // [8(f_{+1}-f_{-1}) - (f_{+2}-f_{-2})]/(12 dt), f = u_{Q,j}^2
    Real two_ij = 0;    // 2(I+J) at the center step
  };

  FluxProbe(const SolverConfig& cfg, std::vector<Cube> cubes, std::vector<int> bands,
            std::vector<int> center_steps);

  void observe(int step, Real time, const SpectralField& u) override;

  const std::vector<Sample>& samples() const { return samples_; }
  const std::vector<PacketSeries>& series() const { return series_; }

 private:
  SolverConfig cfg_;
  std::vector<Cube> cubes_;
  std::vector<int> bands_;
  std::vector<int> centers_;
  std::vector<PacketSeries> series_;           // one per (cube, band)
  std::map<int, std::vector<Real>> two_ij_;    // center step -> 2(I+J) per (cube, band)
  std::vector<Sample> samples_;
  CutoffCache cutoffs_;
};

}  // namespace pkrg
