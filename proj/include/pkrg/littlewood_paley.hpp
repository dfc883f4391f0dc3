#pragma once

#include <iosfwd>
#include <utility>

#include "pkrg/spectral_field.hpp"

namespace pkrg {

struct BandRangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// --- the smooth step and the annulus profile ---------------------------------

/// Monotone C-infinity step: 0 for t <= 0, 1 for t >= 1, symmetric about 1/2
/// (so smooth_step(1/2) = 1/2 exactly). Shared glue for the dyadic step h and
/// the spatial cutoffs.
Real smooth_step(Real t);

/// C-infinity step h: h(x) = 1 for x <= 1, h(x) = 0 for x >= 2, monotone in
/// between. All derivatives vanish at x = 1, 2, so every dyadic rescaling
/// h(|xi| 2^-j) is smooth across the lattice.
Real bump_h(Real x);

/// p(x) = h(|x|) - h(2|x|): supported on 1/2 < |x| < 2.
Real band_profile(Real x);

// --- band selectors -----------------------------------------------------------

/// Which Fourier multiplier to apply. All symbols are built from the
/// cumulative step H_j(xi) = h(|xi| 2^-j), so finite sums telescope exactly:
///   single(j)   = H_j - H_{j-1}          (the annulus p_j)
///   tilde(j)    = H_{j+2} - H_{j-3}      (bands j-2 .. j+2)
///   range(a, b) = H_b - H_{a-1}
///   leq(j)      = H_j                    (includes the mean)
///   geq(j)      = 1 - H_{j-1}
struct BandSelector {
  enum class Kind { single, tilde, range, leq, geq };
  Kind kind;
  int lo = 0;
  int hi = 0;

  static BandSelector single(int j) { return {Kind::single, j, j}; }
  static BandSelector tilde(int j) { return {Kind::tilde, j, j}; }
  static BandSelector range(int lo, int hi) { return {Kind::range, lo, hi}; }
  static BandSelector leq(int j) { return {Kind::leq, j, j}; }
  static BandSelector geq(int j) { return {Kind::geq, j, j}; }
};

/// Bands meaningful for packet/cover analysis on this grid: [1, j_max] with
/// j_max = floor(log2(n/2)) - 1, so the annulus of p_j stays strictly inside
/// the Nyquist ball.
std::pair<int, int> resolved_bands(const FrequencyGrid& grid);

/// Largest j whose annulus still meets the lattice at all (corner modes
/// included). project() accepts j in [0, band_limit]; analysis loops should
/// stay within resolved_bands().
int band_limit(const FrequencyGrid& grid);

/// Symbol values on the lattice for a selector.
RealArray band_symbol(const FrequencyGrid& grid, const BandSelector& sel);

/// Coefficient-wise multiplication by the selector's symbol. Linear, and
/// commutes with every other Fourier multiplier. Throws BandRangeError when a
/// single/tilde index lies outside [0, band_limit].
SpectralField project(const SpectralField& f, const BandSelector& sel);

/// Max over lattice points with 2^jmin <= |xi| <= 2^jmax of
/// |sum_j p_j(xi) - 1|; the partition-of-unity defect on resolved bands.
Real partition_defect(const FrequencyGrid& grid);

// --- Bernstein ratio ----------------------------------------------------------

/// || P_j f ||_q / (2^{3j(1/p - 1/q)} || P_j f ||_p).  Norms are grid norms;
/// with oversample = true they are evaluated on a 2x padded grid (relevant
/// for q = infinity). Requires 1 <= p <= q.
Real bernstein_ratio(const SpectralField& f, int j, Real p, Real q, bool oversample = false);

/// CSV dump of the radial symbol profile: j, |xi|, p_j(|xi|).
void write_symbol_table_csv(std::ostream& os, const FrequencyGrid& grid);

}  // namespace pkrg
