#include "pkrg/packets.hpp"

#include <cmath>

#include "pkrg/fft.hpp"
#include "pkrg/fourier_ops.hpp"

namespace pkrg {

namespace {

Real weighted_l2(const FrequencyGrid& grid, const RealArray& sq_sum) {
  const Real w = std::pow(grid.period(), 3) / static_cast<Real>(grid.size());
  return std::sqrt(w * sq_sum.sum());
}

Real scalar_l2(const FrequencyGrid& grid, const ComplexArray& coeffs) {
  return std::sqrt(std::pow(grid.period(), 3) * coeffs.abs2().sum());
}

}  // namespace

Real packet_norm(const FrequencyGrid& grid, const std::array<RealArray, 3>& band_phys,
                 const Cutoff& cutoff) {
  RealArray sq = cutoff.samples.square() *
                 (band_phys[0].square() + band_phys[1].square() + band_phys[2].square());
  return weighted_l2(grid, sq);
}

Real packet_norm(const SpectralField& u, const Cube& q, int j) {
  const SpectralField band = project(u, BandSelector::single(j));
  std::array<RealArray, 3> phys;
  for (int c = 0; c < 3; ++c) phys[c] = scalar_to_physical(u.grid, band.comp[c]);
  const Cutoff cutoff = make_cutoff(q, u.grid);
  return packet_norm(u.grid, phys, cutoff);
}

Real packet_norm_tilde(const SpectralField& u, const Cube& q, int j, bool* clipped) {
  const int top = band_limit(u.grid);
  if (clipped) *clipped = (j - 2 < 0) || (j + 2 > top);
  Real sum = 0;
  const Cutoff cutoff = make_cutoff(q, u.grid);
  for (int k = std::max(0, j - 2); k <= std::min(top, j + 2); ++k) {
    const SpectralField band = project(u, BandSelector::single(k));
    std::array<RealArray, 3> phys;
    for (int c = 0; c < 3; ++c) phys[c] = scalar_to_physical(u.grid, band.comp[c]);
    sum += packet_norm(u.grid, phys, cutoff);
  }
  return sum;
}

Real bump_move_separated(const FrequencyGrid& grid, const RealArray& phi1,
                         const RealArray& phi2, const ComplexArray& f_hat, int j) {
  const Real f_norm = scalar_l2(grid, f_hat);
  if (f_norm == 0) return 0;
  const RealArray f_phys = scalar_to_physical(grid, f_hat);
  const ComplexArray inner = scalar_to_spectral(grid, (phi2 * f_phys).eval());
  const RealArray symbol = band_symbol(grid, BandSelector::single(j));
  const RealArray proj = scalar_to_physical(grid, (inner * symbol).eval());
  return weighted_l2(grid, (phi1 * proj).square().eval()) / f_norm;
}

Real bump_move_outside_tilde(const FrequencyGrid& grid, const RealArray& phi,
                             const ComplexArray& f_hat, int j) {
  const Real f_norm = scalar_l2(grid, f_hat);
  if (f_norm == 0) return 0;
  const RealArray pj = band_symbol(grid, BandSelector::single(j));
  const RealArray band_phys = scalar_to_physical(grid, (f_hat * pj).eval());
  const ComplexArray masked = scalar_to_spectral(grid, (phi * band_phys).eval());
  const RealArray tilde = band_symbol(grid, BandSelector::tilde(j));
  return scalar_l2(grid, (masked * (1.0 - tilde)).eval()) / f_norm;
}

Real bump_move_inside(const FrequencyGrid& grid, const RealArray& phi,
                      const ComplexArray& f_hat, int j) {
  const Real f_norm = scalar_l2(grid, f_hat);
  if (f_norm == 0) return 0;
  const RealArray tilde = band_symbol(grid, BandSelector::tilde(j));
  const RealArray outside = scalar_to_physical(grid, (f_hat * (1.0 - tilde)).eval());
  const ComplexArray masked = scalar_to_spectral(grid, (phi * outside).eval());
  const RealArray pj = band_symbol(grid, BandSelector::single(j));
  return scalar_l2(grid, (masked * pj).eval()) / f_norm;
}

namespace {

Real fit_slope(const std::vector<int>& bands, const std::vector<Real>& errs) {
  // least squares of log2(err) against j; zero errors are floored at 1e-300
  const int m = static_cast<int>(bands.size());
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < m; ++i) {
    const Real x = bands[i];
    const Real y = std::log2(std::max(errs[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

namespace {

// Bump-profile d-cutoff (tiny plateau, transition across the whole support):
// the smoothest admissible shape, which is what the measured decay rates see.
RealArray bump_cutoff_samples(const FrequencyGrid& grid, const Vec3& center, Real support_side) {
  const int n = grid.n();
  const Real period = grid.period();
  const Real dx = period / n;
  const Real hs = support_side / 2;
  const Real hp = 0.05 * hs;
  std::array<RealArray, 3> axis;
  for (int ax = 0; ax < 3; ++ax) {
    axis[ax].resize(n);
    for (int i = 0; i < n; ++i)
      axis[ax][i] = cutoff_profile(wrapped_delta(i * dx, center[ax], period), hp, hs);
  }
  RealArray out(grid.size());
  Eigen::Index idx = 0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const Real a12 = axis[0][i1] * axis[1][i2];
      for (int i3 = 0; i3 < n; ++i3, ++idx) out[idx] = a12 * axis[2][i3];
    }
  return out;
}

}  // namespace

BumpMoveReport bump_move_error(const BumpMoveConfig& cfg) {
  const Real gap =
      std::sqrt(3.0) * (cfg.period / 2 - cfg.pair_support);  // support gap of the diagonal pair
  for (int j : cfg.bands)
    if (gap <= std::exp2(-j))
      throw std::invalid_argument("bump_move_error: separation " + std::to_string(gap) +
                                  " must exceed 2^-j for band " + std::to_string(j));

  const FrequencyGrid base(cfg.n, cfg.period);
  const FrequencyGrid work = cfg.oversample ? FrequencyGrid(2 * cfg.n, cfg.period) : base;

  const Vec3 c1 = 0.2 * cfg.period * Vec3::Ones();
  const Vec3 c2 = 0.7 * cfg.period * Vec3::Ones();
  const RealArray phi1 = bump_cutoff_samples(work, c1, cfg.pair_support);
  const RealArray phi2 = bump_cutoff_samples(work, c2, cfg.pair_support);
  const RealArray mover =
      bump_cutoff_samples(work, 0.5 * cfg.period * Vec3::Ones(), cfg.mover_support);

  // seeded scalar test field: one component of a random Hermitian field
  SpectralField noise = random_hermitian_field(base, cfg.seed);
  ComplexArray f_hat = cfg.oversample ? pad_spectrum(base, noise.comp[0], work)
                                      : ComplexArray(noise.comp[0]);

  BumpMoveReport rep;
  rep.bands = cfg.bands;
  for (int j : cfg.bands) {
    rep.err_separated.push_back(bump_move_separated(work, phi1, phi2, f_hat, j));
    rep.err_outside_tilde.push_back(bump_move_outside_tilde(work, mover, f_hat, j));
    rep.err_inside.push_back(bump_move_inside(work, mover, f_hat, j));
  }
  rep.slope_separated = fit_slope(rep.bands, rep.err_separated);
  rep.slope_outside = fit_slope(rep.bands, rep.err_outside_tilde);
  rep.slope_inside = fit_slope(rep.bands, rep.err_inside);
  return rep;
}

Real localized_bernstein_ratio(const SpectralField& u, const Cube& q, int j, Real error_quota) {
  if (cube_side(q) <= std::exp2(-j))
    throw std::invalid_argument("localized_bernstein_ratio: cube side must exceed 2^-j");
  const SpectralField band = project(u, BandSelector::single(j));
  std::array<RealArray, 3> phys;
  for (int c = 0; c < 3; ++c) phys[c] = scalar_to_physical(u.grid, band.comp[c]);
  const Cutoff cutoff = make_cutoff(q, u.grid);

  const RealArray mag2 = cutoff.samples.square() *
                         (phys[0].square() + phys[1].square() + phys[2].square());
  const Real sup = std::sqrt(mag2.maxCoeff());
  const Real packet = weighted_l2(u.grid, mag2);
  const Real denom = std::exp2(1.5 * j) * packet + error_quota;
  if (denom == 0) return 0;  // u = 0: 0/0 resolved to 0 by convention
  return sup / denom;
}

}  // namespace pkrg
