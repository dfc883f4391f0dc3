#include "pkrg/estimates.hpp"

#include <cmath>

#include "pkrg/covering.hpp"
#include "pkrg/fft.hpp"
#include "pkrg/fourier_ops.hpp"

namespace pkrg {

Real theta(Real alpha, Real epsilon) { return 2.0 * (2.0 * alpha - 1.0 - epsilon) / 3.0; }

namespace {

std::string cube_label(const Cube& q) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "q%d_%.6g_%.6g_%.6g", q.level, q.center[0], q.center[1],
                q.center[2]);
  return buf;
}

// Band projections in physical space, computed once per band and shared
// across the cutoff evaluations of one estimate.
class BandBank {
 public:
  explicit BandBank(const SpectralField& u) : u_(u) {}

  const std::array<RealArray, 3>& at(int k) {
    auto it = bank_.find(k);
    if (it != bank_.end()) return it->second;
    const SpectralField band = project(u_, BandSelector::single(k));
    std::array<RealArray, 3> phys;
    for (int c = 0; c < 3; ++c) phys[c] = scalar_to_physical(u_.grid, band.comp[c]);
    return bank_.emplace(k, std::move(phys)).first->second;
  }

 private:
  const SpectralField& u_;
  std::map<int, std::array<RealArray, 3>> bank_;
};

Real box_packet(const FrequencyGrid& grid, const std::array<RealArray, 3>& band_phys,
                const RealArray& cutoff2) {
  const RealArray sq = cutoff2 * (band_phys[0].square() + band_phys[1].square() +
                                  band_phys[2].square());
  const Real w = std::pow(grid.period(), 3) / static_cast<Real>(grid.size());
  return std::sqrt(w * sq.sum());
}

}  // namespace

std::pair<Real, Real> flux_identity(const SpectralField& u, const Cube& q, int j, Real alpha,
                                    DealiasRule dealias) {
  const FrequencyGrid& grid = u.grid;
  const Cutoff cutoff = make_cutoff(q, grid);
  const RealArray phi2 = cutoff.samples.square();
  const RealArray pj = band_symbol(grid, BandSelector::single(j));

  // w = P_j(phi^2 P_j u)
  SpectralField w(grid);
  for (int c = 0; c < 3; ++c) {
    const RealArray band_phys = scalar_to_physical(grid, (u.comp[c] * pj).eval());
    w.comp[c] = scalar_to_spectral(grid, (phi2 * band_phys).eval()) * pj;
  }

  const Real I = -l2_inner(fractional_laplacian(u, alpha), w);
  const Real J = l2_inner(nonlinear_term(u, dealias), w);
  return {I, J};
}

EstimateTerms estimate_terms(const SpectralField& u, const Cube& q, int j,
                             const EstimateConfig& cfg) {
  const FrequencyGrid& grid = u.grid;
  const int j_max = resolved_bands(grid).second;
  const Real th = theta(cfg.alpha, cfg.epsilon);
  BandBank bank(u);

  EstimateTerms t;
  t.cube_id = cube_label(q);
  t.j = j;
  t.theta = th;
  t.smallness_waived = std::exp2(cfg.epsilon * j) < 16.0;

  const RealArray phi_q2 = make_cutoff(q, grid).samples.square();
  const RealArray phi_3q2 = cutoff_box_samples(grid, dilate(q, 1.5)).square();

  const Real u_qj = box_packet(grid, bank.at(j), phi_q2);

  auto window_sum = [&](const RealArray& cutoff2, int lo, int hi, bool* clipped) {
    Real sum = 0;
    if (hi > j_max) {
      hi = j_max;
      if (clipped) *clipped = true;
    }
    if (lo < 0) lo = 0;
    for (int k = lo; k <= hi; ++k) sum += box_packet(grid, bank.at(k), cutoff2);
    return sum;
  };

  const Real u_tilde2 = window_sum(phi_3q2, j - 2, j + 2, &t.bands_clipped);
  const Real u_tilde4 = window_sum(phi_3q2, j - 4, j + 4, &t.bands_clipped);

  t.G_diss = std::exp2(2 * cfg.alpha * j) * u_qj * u_qj;

  // low window: theta j <= k <= j - 5, packets on the concentric ancestors
  Real low = 0;
  const int k_lo = static_cast<int>(std::ceil(th * j));
  for (int k = std::max(0, k_lo); k <= j - 5; ++k) {
    const RealArray phi_k2 = cutoff_box_samples(grid, box_of(ancestor(q, k))).square();
    low += std::exp2(j + 1.5 * k) * box_packet(grid, bank.at(k), phi_k2);
  }
  t.G_low_loc = u_qj * u_tilde2 * low;

  t.G_loc = std::exp2(2.5 * j) * u_qj * u_tilde4 * u_tilde4;

  Real hh = 0;
  if (j + 1 <= j_max) {
    t.bands_clipped = true;  // the k >= j+1 tail is truncated at j_max
    for (int k = j + 1; k <= j_max; ++k) {
      const Real p = box_packet(grid, bank.at(k), phi_3q2);
      hh += std::exp2(1.5 * j + k) * p * p;
    }
  }
  t.G_hh = u_qj * hh;

  const Real d = cube_side(q);
  t.e_diss = std::exp2(2 * cfg.alpha * j) / (d * std::exp2(j)) * u_tilde2 * u_tilde2;
  t.e_vl = std::exp2(2 * cfg.alpha * j) * std::exp2(-cfg.epsilon * j) * u_tilde2 * u_tilde2;

  const auto [I, J] = flux_identity(u, q, j, cfg.alpha, cfg.dealias);
  t.I = I;
  t.J = J;
  const Real denom = t.G_low_loc + t.G_loc + t.G_hh;
  if (denom > 0) t.measured_c = J / denom;
  return t;
}

Real regularity_rho(Real alpha, Real epsilon, int delta) {
  return 5.0 - 4.0 * alpha + std::min(10.0, epsilon * delta / 10.0);
}

RegularityWeights regularity_weights(const Cube& q, const BarrierResult& barrier, Real alpha) {
  const Box shell = barrier_shell(barrier);
  if (!box_inside(box_of(q), shell))
    throw std::domain_error("regularity_weights: cube lies outside the barrier region");
  RegularityWeights w;
  w.cube = q;
  int delta = 0;
  while (!box_touches_surface(box_of(ancestor(q, q.level - delta)), shell)) {
    ++delta;
    if (delta > q.level + 100)
      throw std::logic_error("regularity_weights: no ancestor reaches the barrier");
  }
  w.delta = delta;
  w.rho = regularity_rho(alpha, q.epsilon, delta);
  return w;
}

FluxProbe::FluxProbe(const SolverConfig& cfg, std::vector<Cube> cubes, std::vector<int> bands,
                     std::vector<int> center_steps)
    : cfg_(cfg), cubes_(std::move(cubes)), bands_(std::move(bands)),
      centers_(std::move(center_steps)) {
  for (const auto& q : cubes_)
    for (int b : bands_) {
      PacketSeries s;
      s.cube = q;
      s.band = b;
      series_.push_back(std::move(s));
    }
}

void FluxProbe::observe(int step, Real time, const SpectralField& u) {
  const FrequencyGrid& grid = u.grid;

  std::map<int, std::array<RealArray, 3>> band_phys;
  for (int b : bands_) {
    const RealArray symbol = band_symbol(grid, BandSelector::single(b));
    std::array<RealArray, 3> phys;
    for (int c = 0; c < 3; ++c) phys[c] = scalar_to_physical(grid, (u.comp[c] * symbol).eval());
    band_phys.emplace(b, std::move(phys));
  }

  std::size_t slot = 0;
  for (const auto& q : cubes_) {
    const auto cutoff = cutoffs_.get(q, grid);
    for (int b : bands_) {
      auto& series = series_[slot++];
      series.times.push_back(time);
      series.values.push_back(packet_norm(grid, band_phys.at(b), *cutoff));
    }
  }

  if (std::find(centers_.begin(), centers_.end(), step) != centers_.end()) {
    const SpectralField dissipated = fractional_laplacian(u, cfg_.alpha);
    const SpectralField rhs_nl = nonlinear_term(u, cfg_.dealias);
    std::vector<Real> two_ij;
    for (const auto& q : cubes_) {
      const auto cutoff = cutoffs_.get(q, grid);
      const RealArray phi2 = cutoff->samples.square();
      for (int b : bands_) {
        const RealArray pj = band_symbol(grid, BandSelector::single(b));
        SpectralField w(grid);
        for (int c = 0; c < 3; ++c)
          w.comp[c] = scalar_to_spectral(grid, (phi2 * band_phys.at(b)[c]).eval()) * pj;
        const Real I = -l2_inner(dissipated, w);
        const Real J = l2_inner(rhs_nl, w);
        two_ij.push_back(2 * (I + J));
      }
    }
    two_ij_.emplace(step, std::move(two_ij));
  }

  // finalize any center whose +-2 stencil just completed
  const int done_center = step - 2;
  auto it = two_ij_.find(done_center);
  if (it != two_ij_.end()) {
    const int c_idx = static_cast<int>(series_.front().times.size()) - 3;  // center position
    std::size_t pair = 0;
    for (const auto& q : cubes_) {
      for (int b : bands_) {
        const auto& v = series_[pair].values;
        auto sq = [&](int offset) {
          const Real x = v[c_idx + offset];
          return x * x;
        };
        Sample s;
        s.cube = q;
        s.band = b;
        s.time = series_[pair].times[c_idx];
        s.rate = (8 * (sq(1) - sq(-1)) - (sq(2) - sq(-2))) / (12 * cfg_.dt);
        s.two_ij = it->second[pair];
        samples_.push_back(s);
        ++pair;
      }
    }
    two_ij_.erase(it);
  }
}

}  // namespace pkrg
