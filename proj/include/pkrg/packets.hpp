#pragma once

#include <vector>

#include "pkrg/cutoff.hpp"
#include "pkrg/littlewood_paley.hpp"
#include "pkrg/spectral_field.hpp"

namespace pkrg {

/// u_{Q,j}(t) = || phi_Q P_j u(t) ||_{L2} for one (cube, band) pair.
struct PacketSeries {
  Cube cube;
  int band = 0;
  std::vector<Real> times;
  std::vector<Real> values;
};

/// || phi_Q P_j u ||_{L2(torus)}. Band must lie in [0, band_limit(grid)].
Real packet_norm(const SpectralField& u, const Cube& q, int j);

/// Same with the band projection already in physical space (shared across
/// cubes in analysis loops).
Real packet_norm(const FrequencyGrid& grid, const std::array<RealArray, 3>& band_phys,
                 const Cutoff& cutoff);

/// sum_{k=j-2}^{j+2} u_{Q,k} with bands clipped to [0, band_limit];
/// *clipped set when the window lost bands.
Real packet_norm_tilde(const SpectralField& u, const Cube& q, int j, bool* clipped = nullptr);

// --- bump-moving error measurements ------------------------------------------
//
// Scalar-field versions of the cutoff/projection commutation errors. All
// decay super-polynomially in j once the cutoff scale d exceeds 2^-j; the
// report fits log2(error) against j.

struct BumpMoveConfig {
  int n = 128;
  Real period = 1.0;
  std::vector<int> bands = {3, 4, 5, 6};
  // The separated pair sits at diagonal offset (P/2, P/2, P/2); each is a
  // bump-profile d-cutoff with support side `pair_support`. The support gap is
  // sqrt(3) (P/2 - pair_support) and must exceed 2^-j for every tested band.
  Real pair_support = 0.07;
  // Single d-cutoff for the projection-mover tests, support side `mover_support`.
  Real mover_support = 0.9;
  std::uint64_t seed = 1;
  bool oversample = true;  // run products and projections on the 2x padded grid
};

struct BumpMoveReport {
  std::vector<int> bands;
  std::vector<Real> err_separated;      // ||phi1 P_j(phi2 f)|| / ||f||
  std::vector<Real> err_outside_tilde;  // ||(1 - P~_j)(phi P_j f)|| / ||f||
  std::vector<Real> err_inside;         // ||P_j(phi (1 - P~_j) f)|| / ||f||
  Real slope_separated = 0;             // least-squares slope of log2 err vs j
  Real slope_outside = 0;
  Real slope_inside = 0;
};

/// Sample-level measurements (scalar field f given by its coefficients on
/// `grid`; cutoffs given as sample arrays on the same grid).
Real bump_move_separated(const FrequencyGrid& grid, const RealArray& phi1,
                         const RealArray& phi2, const ComplexArray& f_hat, int j);
Real bump_move_outside_tilde(const FrequencyGrid& grid, const RealArray& phi,
                             const ComplexArray& f_hat, int j);
Real bump_move_inside(const FrequencyGrid& grid, const RealArray& phi,
                      const ComplexArray& f_hat, int j);

/// Full sweep: builds two separated cutoffs and a seeded random scalar field,
/// measures all three errors across cfg.bands and fits the decay slopes.
/// Throws std::invalid_argument when the separation is <= 2^-j for some band.
BumpMoveReport bump_move_error(const BumpMoveConfig& cfg);

/// || phi_Q P_j u ||_inf / (2^{3j/2} u_{Q,j} + error_quota); returns 0 for
/// vanishing numerator and denominator (degenerate case, by convention).
/// Pre: cube side > 2^-j.
Real localized_bernstein_ratio(const SpectralField& u, const Cube& q, int j, Real error_quota);

}  // namespace pkrg
