#pragma once

#include <array>
#include <map>
#include <vector>

#include "pkrg/littlewood_paley.hpp"
#include "pkrg/spectral_field.hpp"

namespace pkrg {

/// The four interaction terms of the dyadic product decomposition
///   P_j(fg) = P_j(K_loc_low + K_low_loc + K_loc + K_hh),
///   K_loc_low = P_{j+-2} f . P_{<=j-5} g
///   K_low_loc = P_{<=j-5} f . P_{j+-2} g
///   K_loc     = P_{j-4,j+2} f . P_{j+-4} g
///   K_hh      = sum_{k >= j+3} P_k f . P_{k+-2} g
/// Terms are returned on the input grid (their content beyond the input
/// Nyquist ball is discarded; it never contributes to P_j of the sum).
struct ParaproductParts {
  SpectralField loc_low, low_loc, loc, hh;
};

/// Precomputes the per-band physical pieces of f and g on a 2x zero-padded
/// grid, so products are alias-free and repeated band queries share the
/// transforms. All decomposition identities then hold to rounding.
class ParaproductWorkspace {
 public:
  ParaproductWorkspace(const SpectralField& f, const SpectralField& g);

  const FrequencyGrid& grid() const { return grid_; }

  ParaproductParts split(int j) const;

  /// P_j applied to the sum of the four terms (single transform per call).
  SpectralField sum_projected(int j) const;

  /// P_j applied to the plain product fg, computed once and cached.
  SpectralField product_projected(int j) const;

 private:
  struct Pieces {
    // physical samples of P_k field on the padded grid, per component;
    // empty array when the band holds no spectrum
    std::vector<std::array<RealArray, 3>> band;
    std::array<Real, 3> mean;
  };

  using PrefixCache = std::vector<std::array<RealArray, 3>>;

  std::array<RealArray, 3> select(const Pieces& p, int lo, int hi, bool with_mean) const;
  bool has_content(const Pieces& p, int lo, int hi, bool with_mean) const;
  const std::array<RealArray, 3>& prefix(const Pieces& p, PrefixCache& cache, int m) const;
  const std::array<RealArray, 3>& tilde_of_g(int k) const;
  const std::array<RealArray, 3>& hh_suffix(int k) const;
  void add_product(std::array<RealArray, 3>& acc, const std::array<RealArray, 3>& a,
                   const std::array<RealArray, 3>& b) const;
  void add_cached(std::array<RealArray, 3>& acc, const std::array<RealArray, 3>& term) const;
  SpectralField to_coarse_band_product(const std::array<RealArray, 3>& phys) const;

  void check_band_resolved(int j) const;

  FrequencyGrid grid_;
  FrequencyGrid fine_;
  int k_bot_ = 0;
  int k_top_ = 0;
  Pieces f_, g_;
  mutable PrefixCache prefix_f_, prefix_g_;
  mutable std::map<int, std::array<RealArray, 3>> tilde_g_;  // shared across bands by K_hh
  mutable PrefixCache hh_suffix_;
  mutable SpectralField product_;  // cached spectrum of fg on the input grid
  mutable bool have_product_ = false;
};

/// One-shot form of the decomposition. j must lie in resolved_bands(f.grid).
ParaproductParts paraproduct_split(const SpectralField& f, const SpectralField& g, int j);

}  // namespace pkrg
