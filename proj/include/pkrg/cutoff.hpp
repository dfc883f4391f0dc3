#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "pkrg/cubes.hpp"
#include "pkrg/frequency_grid.hpp"
#include "pkrg/spectral_field.hpp"

namespace pkrg {

struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Smooth spatial cutoff for a cube Q: identically 1 on Q, supported in 7Q/6,
/// tensor product of 1D profiles built from the same glue as the dyadic step.
/// Profile derivative bounds scale as C_k d^{-k} with C_k fixed by the
/// profile shape; measured_c1 is the grid finite-difference check
/// ||grad phi||_inf * d recorded at construction (reported, never asserted —
/// the analytic profile constant is 12 * profile_derivative_constant(1)).
struct Cutoff {
  Cube cube;
  RealArray samples;  // one value per grid point
  Real measured_c1 = 0;
};

/// 1D profile: 1 for |s| <= half_plateau, 0 for |s| >= half_support, smooth
/// monotone glue between.
Real cutoff_profile(Real dist, Real half_plateau, Real half_support);

/// sup |d^k/ds^k profile| * (transition width)^k ... measured on a dense 1D
/// sampling of the unit profile; k in {1, 2, 3}. The bound C_k on
/// ||grad^k phi_Q||_inf d^k follows as this constant times 12^k.
Real profile_derivative_constant(int k);

/// Samples of the cutoff for a plateau box (1 on the box, 0 outside 7/6 box).
/// An axis saturates to 1 when 7/6 of the box side reaches the period.
RealArray cutoff_box_samples(const FrequencyGrid& grid, const Box& plateau);

/// Cutoff for a cube; throws ResolutionError when the cube side is under
/// 8 grid cells.
Cutoff make_cutoff(const Cube& q, const FrequencyGrid& grid);

/// Read-mostly cache keyed by (cube geometry, grid); analysis loops hit the
/// same cutoffs for every time step.
class CutoffCache {
 public:
  std::shared_ptr<const Cutoff> get(const Cube& q, const FrequencyGrid& grid);

 private:
  using Key = std::tuple<Real, Real, Real, int, Real, int>;
  std::mutex mutex_;
  std::map<Key, std::shared_ptr<const Cutoff>> cache_;
};

}  // namespace pkrg
