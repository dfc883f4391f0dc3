#pragma once

#include <map>
#include <string>
#include <vector>

#include "pkrg/cubes.hpp"
#include "pkrg/solver.hpp"

namespace pkrg {

struct CoverParams {
  Real alpha = 1.05;
  Real epsilon = 0.01;
  Real eta = std::exp2(-12);  // naughtiness density; the barrier argument
                              // needs c eta < 2^-10/2
};

/// Good/bad verdict for one cube: good iff the windowed high-frequency
/// dissipation integral int int_Q sum_{k>=j} 2^{2 alpha k} |P_k u|^2 stays
/// below 2^{-j(5-4 alpha + eps)}.
struct GoodnessRecord {
  Cube cube;
  Real integral = 0;
  Real threshold = 0;
  bool good = true;
  Real window_lo = 0, window_hi = 0;
  bool bands_clipped = false;  // the k >= j sum is truncated at the resolved ceiling
};

enum class Provenance { A_j, B_jk, B_j, C_j };

struct CoverFamily {
  int level = 0;
  Provenance provenance = Provenance::A_j;
  int k = 0;  // the source level for B_jk families
  std::vector<Cube> cubes;
  Real cardinality_budget = 0;  // budget with constant 1
  Real measured_c = 0;          // #cubes / budget
};

/// One record per lattice j-cube; time integral by the trapezoid rule over
/// the snapshots inside [window_lo, window_hi]. Throws std::domain_error for
/// an empty window.
std::vector<GoodnessRecord> classify(const Trajectory& tr, int j, Real window_lo, Real window_hi,
                                     const CoverParams& params);

/// Greedy Vitali selection of pairwise-disjoint bad cubes; each selected cube
/// expands to 5Q and is re-tiled by at most 6^3 j-cubes. Throws
/// std::domain_error on mixed levels.
CoverFamily vitali_cover(const std::vector<Cube>& bad, int j, const CoverParams& params);

/// The full naughty-cube construction for one level j given the Vitali
/// families A_k, k >= j.
struct NaughtyCoverResult {
  CoverFamily b_j;                  // final cover: every pre-expansion cube replaced by 3Q tiles
  std::vector<CoverFamily> per_k;   // B_{j,k} (re-tiled 3Q^{(l)} unions), one per source level
  std::vector<Cube> pre_expansion;  // union of the B_{j,k} tiles, before the final 3Q pass
};

NaughtyCoverResult naughty_cover(const std::map<int, CoverFamily>& a_families, int j,
                                 const CoverParams& params);

// --- barrier ------------------------------------------------------------------

struct RadiusInterval {
  Real lo = 0, hi = 0;
};

/// Dilation radii r at which the shell boundary(r outer) can meet the inner
/// cube: [r' - b/a, r' + b/a] (clipped at 0), where r' = |x - y|_inf / a,
/// outer has half-side a, inner half-side b. boundary(r outer) intersects
/// inner => r lies inside the returned interval.
RadiusInterval geometric_interval(const Box& outer, const Box& inner);

struct BarrierNotFoundError : std::runtime_error {
  explicit BarrierNotFoundError(Real l1)
      : std::runtime_error("barrier_search: no free radius; ||f||_L1 = " + std::to_string(l1)),
        f_l1(l1) {}
  Real f_l1;
};

struct BarrierResult {
  Vec3 x = Vec3::Zero();
  int j1 = 0;
  Real epsilon = 0.01;
  Real period = 1;
  Real r = 0;                            // chosen radius, f(r) = 0
  std::vector<RadiusInterval> blocked;   // all cube intervals clipped to (0, 2^-10)
  Real f_l1 = 0;
  bool verified = false;

  /// f(r): how many deposited intervals contain r.
  int count_at(Real r_query) const;
};

/// The cube whose boundary is the barrier surface.
Box barrier_shell(const BarrierResult& b);

/// Builds f = sum_k f_k from the cubes in `covers` (levels >= j1), sweeps the
/// interval endpoints for a radius in (0, 2^-10) with f(r) = 0 (exact, no
/// sampling), then re-verifies the choice cube by cube with the exact surface
/// test. Throws BarrierNotFoundError otherwise.
BarrierResult barrier_search(const Vec3& x, int j1, Real epsilon,
                             const std::map<int, std::vector<Cube>>& covers, Real period = 1.0);

/// C_j: j-covers of every element of B_k for k in [floor(theta j - 10), j],
/// clipped to the available families.
CoverFamily refined_cover(const std::map<int, CoverFamily>& b_families, int j, Real theta_value,
                          const CoverParams& params);

/// ceil(side/s)^3 j-cubes covering an arbitrary box (tiles concentric with it).
std::vector<Cube> cover_box_by_cubes(const Box& b, int level, Real epsilon);

/// Does any cube of the family contain the point (open cubes, wrapped)?
bool family_covers_point(const CoverFamily& fam, const Vec3& x);

/// Synthetic Vitali-like families with #A_k = ceil(c_a 2^{k(5-4 alpha+eps)}),
/// half uniform, half clustered; the adversarial input for the cover suites.
std::map<int, CoverFamily> synthetic_vitali_families(int k_lo, int k_hi,
                                                     const CoverParams& params, Real c_a,
                                                     std::uint64_t seed, Real period = 1.0);

// closed-form cardinality exponents
Real aj_budget_exponent(Real alpha, Real epsilon);        // 5 - 4 alpha + eps
Real cj_budget_exponent(Real alpha, Real epsilon);        // (-16a^2+16a(1+e)+5-17e-4e^2)/3

}  // namespace pkrg
