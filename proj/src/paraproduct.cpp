#include "pkrg/paraproduct.hpp"

#include <cmath>

#include "pkrg/fft.hpp"
#include "pkrg/fourier_ops.hpp"

namespace pkrg {

namespace {

RealArray cumulative(const FrequencyGrid& grid, int m, const RealArray& xi) {
  RealArray h(grid.size());
  const Real scale = std::pow(2.0, -m);
  for (Eigen::Index i = 0; i < grid.size(); ++i) h[i] = bump_h(xi[i] * scale);
  return h;
}

}  // namespace

ParaproductWorkspace::ParaproductWorkspace(const SpectralField& f, const SpectralField& g) {
  if (f.grid != g.grid) throw std::invalid_argument("paraproduct: grids differ");
  grid_ = f.grid;
  // 3/2-rule padding: Nyquist planes are dropped from the inputs, so modes
  // reach N/2 - 1, products reach N - 2, and on a grid of at least 3N/2 every
  // alias image lands at |k| >= N/2 + 2, outside the truncated comparison
  // range. The reconstruction identity is exact to rounding, as with a full
  // 2x pad, at less than half the transform cost.
  const int fine_n = 2 * ((3 * grid_.n() / 2 + 3) / 4) * 2;
  fine_ = FrequencyGrid(fine_n, grid_.period());

  // Band floor/ceiling so that mean + sum_k p_k = 1 on the whole input lattice.
  const Real xi_min = 1.0 / grid_.period();
  k_bot_ = static_cast<int>(std::floor(std::log2(xi_min)));
  k_top_ = band_limit(grid_);

  SpectralField f_clean = f, g_clean = g;
  zero_nyquist(f_clean);
  zero_nyquist(g_clean);

  // Band masking happens on the coarse lattice (the symbols agree on shared
  // modes), so only the inverse transforms touch the padded grid.
  const RealArray xi = grid_.abs_xi();
  for (auto [field, src] : {std::pair{&f_, &f_clean}, std::pair{&g_, &g_clean}}) {
    field->band.resize(k_top_ - k_bot_ + 1);
    for (int c = 0; c < 3; ++c) field->mean[c] = src->comp[c][0].real();
    RealArray h_prev = cumulative(grid_, k_bot_ - 1, xi);
    for (int k = k_bot_; k <= k_top_; ++k) {
      RealArray h_cur = cumulative(grid_, k, xi);
      const RealArray symbol = h_cur - h_prev;
      h_prev.swap(h_cur);
      auto& slot = field->band[k - k_bot_];
      for (int c = 0; c < 3; ++c) {
        ComplexArray masked = src->comp[c] * symbol;
        if (masked.abs().maxCoeff() == 0) continue;  // empty band: skip transform
        slot[c] = scalar_to_physical(fine_, pad_spectrum(grid_, masked, fine_));
      }
    }
  }
}

bool ParaproductWorkspace::has_content(const Pieces& p, int lo, int hi, bool with_mean) const {
  if (with_mean && (p.mean[0] != 0 || p.mean[1] != 0 || p.mean[2] != 0)) return true;
  for (int k = std::max(lo, k_bot_); k <= std::min(hi, k_top_); ++k)
    for (int c = 0; c < 3; ++c)
      if (p.band[k - k_bot_][c].size() > 0) return true;
  return false;
}

// Components with no selected content stay as size-0 arrays so sparse test
// fields (single modes, shell fields) never touch full-size buffers.
std::array<RealArray, 3> ParaproductWorkspace::select(const Pieces& p, int lo, int hi,
                                                      bool with_mean) const {
  std::array<RealArray, 3> out;
  for (int c = 0; c < 3; ++c) {
    if (with_mean && p.mean[c] != 0) out[c] = RealArray::Constant(fine_.size(), p.mean[c]);
  }
  for (int k = std::max(lo, k_bot_); k <= std::min(hi, k_top_); ++k) {
    const auto& slot = p.band[k - k_bot_];
    for (int c = 0; c < 3; ++c) {
      if (slot[c].size() == 0) continue;
      if (out[c].size() == 0)
        out[c] = slot[c];
      else
        out[c] += slot[c];
    }
  }
  return out;
}

const std::array<RealArray, 3>& ParaproductWorkspace::prefix(const Pieces& p, PrefixCache& cache,
                                                             int m) const {
  // cache[i] = sum of the pieces up to band k_bot + i (no mean)
  const int top_index = k_top_ - k_bot_;
  if (cache.empty()) {
    cache.resize(top_index + 1);
    std::array<RealArray, 3> acc;
    for (int i = 0; i <= top_index; ++i) {
      for (int c = 0; c < 3; ++c) {
        const auto& slot = p.band[i][c];
        if (slot.size() == 0) continue;
        if (acc[c].size() == 0)
          acc[c] = slot;
        else
          acc[c] += slot;
      }
      cache[i] = acc;
    }
  }
  const int idx = std::clamp(m - k_bot_, 0, top_index);
  return cache[idx];
}

const std::array<RealArray, 3>& ParaproductWorkspace::tilde_of_g(int k) const {
  auto it = tilde_g_.find(k);
  if (it == tilde_g_.end()) it = tilde_g_.emplace(k, select(g_, k - 2, k + 2, false)).first;
  return it->second;
}

void ParaproductWorkspace::add_product(std::array<RealArray, 3>& acc,
                                       const std::array<RealArray, 3>& a,
                                       const std::array<RealArray, 3>& b) const {
  for (int c = 0; c < 3; ++c) {
    if (a[c].size() == 0 || b[c].size() == 0) continue;
    if (acc[c].size() == 0)
      acc[c] = a[c] * b[c];
    else
      acc[c] += a[c] * b[c];
  }
}

void ParaproductWorkspace::add_cached(std::array<RealArray, 3>& acc,
                                      const std::array<RealArray, 3>& term) const {
  for (int c = 0; c < 3; ++c) {
    if (term[c].size() == 0) continue;
    if (acc[c].size() == 0)
      acc[c] = term[c];
    else
      acc[c] += term[c];
  }
}

// suffix[i] = sum_{m >= k_bot + i} P_m f . P_{m+-2} g, shared by every band's
// high-high block
const std::array<RealArray, 3>& ParaproductWorkspace::hh_suffix(int k) const {
  const int top_index = k_top_ - k_bot_;
  if (hh_suffix_.empty()) {
    hh_suffix_.resize(top_index + 2);  // [top_index + 1] stays empty
    for (int i = top_index; i >= 0; --i) {
      hh_suffix_[i] = hh_suffix_[i + 1];
      const auto& fk = f_.band[i];
      if (fk[0].size() == 0 && fk[1].size() == 0 && fk[2].size() == 0) continue;
      add_product(hh_suffix_[i], fk, tilde_of_g(k_bot_ + i));
    }
  }
  const int idx = std::clamp(k - k_bot_, 0, top_index + 1);
  return hh_suffix_[idx];
}

SpectralField ParaproductWorkspace::to_coarse_band_product(
    const std::array<RealArray, 3>& phys) const {
  SpectralField fine(fine_);
  for (int c = 0; c < 3; ++c)
    if (phys[c].size() > 0) fine.comp[c] = scalar_to_spectral(fine_, phys[c]);
  SpectralField out = truncate_spectrum(fine, grid_);
  zero_nyquist(out);
  return out;
}

void ParaproductWorkspace::check_band_resolved(int j) const {
  const auto [j_min, j_max] = resolved_bands(grid_);
  if (j < j_min || j > j_max)
    throw BandRangeError("paraproduct band " + std::to_string(j) + " outside resolved [" +
                         std::to_string(j_min) + ", " + std::to_string(j_max) + "]");
}

ParaproductParts ParaproductWorkspace::split(int j) const {
  check_band_resolved(j);
  std::array<RealArray, 3> loc_low, low_loc, loc, hh;
  if (has_content(g_, k_bot_, j - 5, true) && has_content(f_, j - 2, j + 2, false))
    add_product(loc_low, select(f_, j - 2, j + 2, false), select(g_, k_bot_, j - 5, true));
  if (has_content(f_, k_bot_, j - 5, true) && has_content(g_, j - 2, j + 2, false))
    add_product(low_loc, select(f_, k_bot_, j - 5, true), select(g_, j - 2, j + 2, false));
  if (has_content(f_, j - 4, j + 2, false) && has_content(g_, j - 4, j + 4, false))
    add_product(loc, select(f_, j - 4, j + 2, false), select(g_, j - 4, j + 4, false));
  add_cached(hh, hh_suffix(j + 3));

  ParaproductParts parts;
  parts.loc_low = to_coarse_band_product(loc_low);
  parts.low_loc = to_coarse_band_product(low_loc);
  parts.loc = to_coarse_band_product(loc);
  parts.hh = to_coarse_band_product(hh);
  return parts;
}

SpectralField ParaproductWorkspace::sum_projected(int j) const {
  check_band_resolved(j);
  std::array<RealArray, 3> total;
  if (has_content(g_, k_bot_, j - 5, true) && has_content(f_, j - 2, j + 2, false))
    add_product(total, select(f_, j - 2, j + 2, false), select(g_, k_bot_, j - 5, true));
  if (has_content(f_, k_bot_, j - 5, true) && has_content(g_, j - 2, j + 2, false))
    add_product(total, select(f_, k_bot_, j - 5, true), select(g_, j - 2, j + 2, false));
  if (has_content(f_, j - 4, j + 2, false) && has_content(g_, j - 4, j + 4, false)) {
    // the local windows clip at k_bot for small j, where the shared prefix
    // sums replace fresh piece sums
    if (j - 4 <= k_bot_)
      add_product(total, prefix(f_, prefix_f_, j + 2), prefix(g_, prefix_g_, j + 4));
    else
      add_product(total, select(f_, j - 4, j + 2, false), select(g_, j - 4, j + 4, false));
  }
  add_cached(total, hh_suffix(j + 3));
  return project(to_coarse_band_product(total), BandSelector::single(j));
}

SpectralField ParaproductWorkspace::product_projected(int j) const {
  check_band_resolved(j);
  if (!have_product_) {
    std::array<RealArray, 3> f_all = prefix(f_, prefix_f_, k_top_);
    std::array<RealArray, 3> g_all = prefix(g_, prefix_g_, k_top_);
    for (int c = 0; c < 3; ++c) {
      if (f_.mean[c] != 0) {
        if (f_all[c].size() == 0)
          f_all[c] = RealArray::Constant(fine_.size(), f_.mean[c]);
        else
          f_all[c] += f_.mean[c];
      }
      if (g_.mean[c] != 0) {
        if (g_all[c].size() == 0)
          g_all[c] = RealArray::Constant(fine_.size(), g_.mean[c]);
        else
          g_all[c] += g_.mean[c];
      }
    }
    std::array<RealArray, 3> prod;
    add_product(prod, f_all, g_all);
    product_ = to_coarse_band_product(prod);
    have_product_ = true;
  }
  return project(product_, BandSelector::single(j));
}

ParaproductParts paraproduct_split(const SpectralField& f, const SpectralField& g, int j) {
  return ParaproductWorkspace(f, g).split(j);
}

}  // namespace pkrg
