#include "pkrg/covering.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pkrg/fft.hpp"
#include "pkrg/fourier_ops.hpp"
#include "pkrg/littlewood_paley.hpp"

namespace pkrg {

Real aj_budget_exponent(Real alpha, Real epsilon) { return 5 - 4 * alpha + epsilon; }

Real cj_budget_exponent(Real alpha, Real epsilon) {
  return (-16 * alpha * alpha + 16 * alpha * (1 + epsilon) + 5 - 17 * epsilon -
          4 * epsilon * epsilon) /
         3.0;
}

// --- classification -----------------------------------------------------------

namespace {

// 3D prefix sums with wrapped range queries; voxel membership by voxel center.
class VoxelSums {
 public:
  VoxelSums(const RealArray& field, int n) : n_(n) {
    prefix_.assign(static_cast<std::size_t>(n + 1) * (n + 1) * (n + 1), 0.0);
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int i3 = 0; i3 < n; ++i3) {
          const Real v = field[(static_cast<Eigen::Index>(i1) * n + i2) * n + i3];
          at(i1 + 1, i2 + 1, i3 + 1) = v + at(i1, i2 + 1, i3 + 1) + at(i1 + 1, i2, i3 + 1) +
                                       at(i1 + 1, i2 + 1, i3) - at(i1, i2, i3 + 1) -
                                       at(i1, i2 + 1, i3) - at(i1 + 1, i2, i3) +
                                       at(i1, i2, i3);
        }
  }

  // sum over voxels whose centers fall in [lo, hi) per axis, wrapped
  Real wrapped_sum(const std::array<std::pair<Real, Real>, 3>& ranges, Real period) const {
    std::array<std::vector<std::pair<int, int>>, 3> spans;
    for (int ax = 0; ax < 3; ++ax) {
      const Real dx = period / n_;
      Real lo = ranges[ax].first, hi = ranges[ax].second;
      if (hi - lo >= period) {
        spans[ax].push_back({0, n_});
        continue;
      }
      lo = std::fmod(std::fmod(lo, period) + period, period);
      hi = std::fmod(std::fmod(hi, period) + period, period);
      // first voxel center >= lo is ceil(lo/dx - 1/2); last strictly below hi
      auto idx_of = [&](Real x) { return static_cast<int>(std::ceil(x / dx - 0.5 - 1e-12)); };
      if (lo < hi) {
        spans[ax].push_back({idx_of(lo), idx_of(hi)});
      } else {  // wraps past the origin
        spans[ax].push_back({idx_of(lo), n_});
        spans[ax].push_back({0, idx_of(hi)});
      }
    }
    Real total = 0;
    for (const auto& s1 : spans[0])
      for (const auto& s2 : spans[1])
        for (const auto& s3 : spans[2]) total += block(s1, s2, s3);
    return total;
  }

 private:
  Real& at(int i, int j, int k) {
    return prefix_[(static_cast<std::size_t>(i) * (n_ + 1) + j) * (n_ + 1) + k];
  }
  Real at(int i, int j, int k) const {
    return prefix_[(static_cast<std::size_t>(i) * (n_ + 1) + j) * (n_ + 1) + k];
  }
  Real block(std::pair<int, int> a, std::pair<int, int> b, std::pair<int, int> c) const {
    const int a0 = std::clamp(a.first, 0, n_), a1 = std::clamp(a.second, 0, n_);
    const int b0 = std::clamp(b.first, 0, n_), b1 = std::clamp(b.second, 0, n_);
    const int c0 = std::clamp(c.first, 0, n_), c1 = std::clamp(c.second, 0, n_);
    if (a0 >= a1 || b0 >= b1 || c0 >= c1) return 0;
    return at(a1, b1, c1) - at(a0, b1, c1) - at(a1, b0, c1) - at(a1, b1, c0) + at(a0, b0, c1) +
           at(a0, b1, c0) + at(a1, b0, c0) - at(a0, b0, c0);
  }

  int n_;
  std::vector<Real> prefix_;
};

}  // namespace

std::vector<GoodnessRecord> classify(const Trajectory& tr, int j, Real window_lo, Real window_hi,
                                     const CoverParams& params) {
  if (!(window_hi > window_lo)) throw std::domain_error("classify: empty analysis window");
  std::vector<std::pair<Real, const SpectralField*>> snaps;
  for (const auto& [t, u] : tr.snapshots)
    if (t >= window_lo - 1e-12 && t <= window_hi + 1e-12) snaps.emplace_back(t, &u);
  if (snaps.empty()) throw std::domain_error("classify: no snapshots inside the window");

  const FrequencyGrid& grid = snaps.front().second->grid;
  const int n = grid.n();
  const int j_max = resolved_bands(grid).second;

  // time-integrated high-frequency density sum_{k>=j} 2^{2 alpha k} |P_k u|^2
  RealArray accumulated = RealArray::Zero(grid.size());
  for (std::size_t s = 0; s < snaps.size(); ++s) {
    RealArray density = RealArray::Zero(grid.size());
    for (int k = j; k <= j_max; ++k) {
      const RealArray symbol = band_symbol(grid, BandSelector::single(k));
      const Real weight = std::exp2(2 * params.alpha * k);
      for (int c = 0; c < 3; ++c) {
        const RealArray phys =
            scalar_to_physical(grid, (snaps[s].second->comp[c] * symbol).eval());
        density += weight * phys.square();
      }
    }
    Real w;  // trapezoid weight
    if (snaps.size() == 1)
      w = 0;
    else if (s == 0)
      w = (snaps[1].first - snaps[0].first) / 2;
    else if (s + 1 == snaps.size())
      w = (snaps[s].first - snaps[s - 1].first) / 2;
    else
      w = (snaps[s + 1].first - snaps[s - 1].first) / 2;
    accumulated += w * density;
  }
  accumulated *= std::pow(grid.period(), 3) / static_cast<Real>(grid.size());  // voxel measure

  VoxelSums sums(accumulated, n);
  const Real threshold = std::exp2(-j * aj_budget_exponent(params.alpha, params.epsilon));

  std::vector<GoodnessRecord> records;
  for (const auto& q : tile_lattice(j, params.epsilon, grid.period())) {
    const Real half = cube_side(q) / 2;
    std::array<std::pair<Real, Real>, 3> ranges;
    for (int ax = 0; ax < 3; ++ax)
      ranges[ax] = {q.center[ax] - half, q.center[ax] + half};
    GoodnessRecord rec;
    rec.cube = q;
    rec.integral = sums.wrapped_sum(ranges, grid.period());
    rec.threshold = threshold;
    rec.good = rec.integral <= threshold;
    rec.window_lo = window_lo;
    rec.window_hi = window_hi;
    rec.bands_clipped = true;  // k >= j truncated at j_max
    records.push_back(rec);
  }
  return records;
}

// --- covers --------------------------------------------------------------------

std::vector<Cube> cover_box_by_cubes(const Box& b, int level, Real epsilon) {
  const Cube proto{b.center, level, epsilon, b.period};
  const Real s = cube_side(proto);
  const int m = std::max(1, static_cast<int>(std::ceil(b.side / s - 1e-12)));
  std::vector<Cube> tiles;
  tiles.reserve(static_cast<std::size_t>(m) * m * m);
  const Real start = -(m - 1) * s / 2;
  for (int i1 = 0; i1 < m; ++i1)
    for (int i2 = 0; i2 < m; ++i2)
      for (int i3 = 0; i3 < m; ++i3) {
        Cube q = proto;
        q.center = b.center + Vec3(start + i1 * s, start + i2 * s, start + i3 * s);
        for (int ax = 0; ax < 3; ++ax)
          q.center[ax] = std::fmod(std::fmod(q.center[ax], b.period) + b.period, b.period);
        tiles.push_back(q);
      }
  return tiles;
}

bool family_covers_point(const CoverFamily& fam, const Vec3& x) {
  for (const auto& q : fam.cubes) {
    const Real half = cube_side(q) / 2;
    bool inside = true;
    for (int ax = 0; ax < 3; ++ax)
      inside = inside && std::abs(wrapped_delta(x[ax], q.center[ax], q.period)) < half;
    if (inside) return true;
  }
  return false;
}

CoverFamily vitali_cover(const std::vector<Cube>& bad, int j, const CoverParams& params) {
  for (const auto& q : bad)
    if (q.level != j) throw std::domain_error("vitali_cover: mixed cube levels");

  std::vector<Cube> kernel;  // pairwise disjoint selection, input order
  for (const auto& q : bad) {
    bool disjoint = true;
    for (const auto& sel : kernel)
      if (boxes_overlap(box_of(q), box_of(sel))) {
        disjoint = false;
        break;
      }
    if (disjoint) kernel.push_back(q);
  }

  CoverFamily fam;
  fam.level = j;
  fam.provenance = Provenance::A_j;
  for (const auto& sel : kernel) {
    const auto tiles = cover_box_by_cubes(dilate(sel, 5.0), j, sel.epsilon);
    fam.cubes.insert(fam.cubes.end(), tiles.begin(), tiles.end());
  }
  fam.cardinality_budget = std::exp2(j * aj_budget_exponent(params.alpha, params.epsilon));
  fam.measured_c = fam.cubes.empty() ? 0 : fam.cubes.size() / fam.cardinality_budget;
  return fam;
}

NaughtyCoverResult naughty_cover(const std::map<int, CoverFamily>& a_families, int j,
                                 const CoverParams& params) {
  if (!(params.eta > 0 && params.eta < 1))
    throw std::domain_error("naughty_cover: eta must lie in (0, 1)");
  const Real period = a_families.empty() ? 1.0 : a_families.begin()->second.cubes.empty()
                                                      ? 1.0
                                                      : a_families.begin()->second.cubes[0].period;
  const auto candidates = tile_lattice(j, params.epsilon, period);

  NaughtyCoverResult result;
  result.b_j.level = j;
  result.b_j.provenance = Provenance::B_j;

  for (const auto& [k, a_k] : a_families) {
    if (k < j) continue;
    const Real threshold = params.eta * std::exp2((k - j) * (5 - 4 * params.alpha +
                                                             2 * params.epsilon));
    // k-naughty j-cubes: those meeting more than `threshold` elements of A_k
    std::vector<Cube> naughty;
    for (const auto& q : candidates) {
      int hits = 0;
      for (const auto& a : a_k.cubes)
        if (boxes_overlap(box_of(q), box_of(a))) ++hits;
      if (hits > threshold) naughty.push_back(q);
    }

    // greedy: next cube disjoint from every selected 3Q
    std::vector<Cube> selected;
    for (const auto& q : naughty) {
      bool ok = true;
      for (const auto& sel : selected)
        if (boxes_overlap(box_of(q), dilate(sel, 3.0))) {
          ok = false;
          break;
        }
      if (ok) selected.push_back(q);
    }

    CoverFamily b_jk;
    b_jk.level = j;
    b_jk.provenance = Provenance::B_jk;
    b_jk.k = k;
    for (const auto& sel : selected) {
      const auto tiles = cover_box_by_cubes(dilate(sel, 3.0), j, sel.epsilon);
      b_jk.cubes.insert(b_jk.cubes.end(), tiles.begin(), tiles.end());
    }
    b_jk.cardinality_budget =
        std::exp2(j * aj_budget_exponent(params.alpha, params.epsilon)) *
        std::exp2(params.epsilon * (j - k)) / params.eta;
    b_jk.measured_c = b_jk.cubes.empty() ? 0 : b_jk.cubes.size() / b_jk.cardinality_budget;
    result.pre_expansion.insert(result.pre_expansion.end(), b_jk.cubes.begin(),
                                b_jk.cubes.end());
    result.per_k.push_back(std::move(b_jk));
  }

  // barrier-property recovery: replace every cube by 3Q, re-tiled
  for (const auto& q : result.pre_expansion) {
    const auto tiles = cover_box_by_cubes(dilate(q, 3.0), j, q.epsilon);
    result.b_j.cubes.insert(result.b_j.cubes.end(), tiles.begin(), tiles.end());
  }
  result.b_j.cardinality_budget =
      std::exp2(j * aj_budget_exponent(params.alpha, params.epsilon)) / params.eta;
  result.b_j.measured_c =
      result.b_j.cubes.empty() ? 0 : result.b_j.cubes.size() / result.b_j.cardinality_budget;
  return result;
}

// --- barrier ------------------------------------------------------------------

RadiusInterval geometric_interval(const Box& outer, const Box& inner) {
  const Real a = outer.side / 2;
  const Real b = inner.side / 2;
  Real dist = 0;
  for (int ax = 0; ax < 3; ++ax)
    dist = std::max(dist, std::abs(wrapped_delta(inner.center[ax], outer.center[ax],
                                                 outer.period)));
  const Real r_prime = dist / a;  // concentric centers give r' = 0 by convention
  return {std::max(0.0, r_prime - b / a), r_prime + b / a};
}

int BarrierResult::count_at(Real r_query) const {
  int count = 0;
  for (const auto& iv : blocked)
    if (r_query >= iv.lo && r_query <= iv.hi) ++count;
  return count;
}

Box barrier_shell(const BarrierResult& b) {
  const Cube outer{b.x, b.j1, b.epsilon, b.period};
  return {b.x, b.r * cube_side(outer), b.period};
}

BarrierResult barrier_search(const Vec3& x, int j1, Real epsilon,
                             const std::map<int, std::vector<Cube>>& covers, Real period) {
  constexpr Real r_max = 1.0 / 1024.0;  // (0, 2^-10)
  BarrierResult result;
  result.x = x;
  result.j1 = j1;
  result.epsilon = epsilon;
  result.period = period;

  const Box outer = box_of(Cube{x, j1, epsilon, period});
  for (const auto& [k, cubes] : covers) {
    if (k < j1) continue;
    for (const auto& q : cubes) {
      RadiusInterval iv = geometric_interval(outer, box_of(q));
      iv.lo = std::max(iv.lo, 0.0);
      iv.hi = std::min(iv.hi, r_max);
      if (iv.lo >= iv.hi) continue;  // misses (0, r_max)
      result.f_l1 += iv.hi - iv.lo;
      result.blocked.push_back(iv);
    }
  }

  // exact sweep over interval endpoints for a gap
  Real r_found = -1;
  if (result.blocked.empty()) {
    r_found = r_max / 2;
  } else {
    std::vector<RadiusInterval> sorted = result.blocked;
    std::sort(sorted.begin(), sorted.end(),
              [](const RadiusInterval& a, const RadiusInterval& b) { return a.lo < b.lo; });
    Real covered_to = 0;
    for (const auto& iv : sorted) {
      if (iv.lo > covered_to) break;  // gap (covered_to, iv.lo)
      covered_to = std::max(covered_to, iv.hi);
    }
    if (covered_to >= r_max) throw BarrierNotFoundError(result.f_l1);
    // first gap starts at covered_to; find its right edge
    Real gap_hi = r_max;
    for (const auto& iv : sorted)
      if (iv.lo > covered_to) {
        gap_hi = std::min(gap_hi, iv.lo);
        break;
      }
    r_found = covered_to == 0 ? std::min(gap_hi, r_max) / 2 : (covered_to + gap_hi) / 2;
  }
  result.r = r_found;

  // independent re-check with the exact surface predicate
  const Box shell = barrier_shell(result);
  bool clean = result.count_at(result.r) == 0;
  for (const auto& [k, cubes] : covers) {
    if (!clean || k < j1) continue;
    for (const auto& q : cubes)
      if (box_touches_surface(box_of(q), shell)) {
        clean = false;
        break;
      }
  }
  result.verified = clean;
  if (!clean) throw BarrierNotFoundError(result.f_l1);
  return result;
}

CoverFamily refined_cover(const std::map<int, CoverFamily>& b_families, int j, Real theta_value,
                          const CoverParams& params) {
  CoverFamily fam;
  fam.level = j;
  fam.provenance = Provenance::C_j;
  const int k_lo_nominal = static_cast<int>(std::floor(theta_value * j - 10));
  for (const auto& [k, b_k] : b_families) {
    if (k < k_lo_nominal || k > j) continue;  // nominal range clipped to what exists
    for (const auto& q : b_k.cubes) {
      const auto tiles = cover_box_by_cubes(box_of(q), j, q.epsilon);
      fam.cubes.insert(fam.cubes.end(), tiles.begin(), tiles.end());
    }
  }
  fam.cardinality_budget = std::exp2(j * cj_budget_exponent(params.alpha, params.epsilon));
  fam.measured_c = fam.cubes.empty() ? 0 : fam.cubes.size() / fam.cardinality_budget;
  return fam;
}

std::map<int, CoverFamily> synthetic_vitali_families(int k_lo, int k_hi,
                                                     const CoverParams& params, Real c_a,
                                                     std::uint64_t seed, Real period) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> unif(0.0, period);
  std::map<int, CoverFamily> families;
  for (int k = k_lo; k <= k_hi; ++k) {
    const Real budget = c_a * std::exp2(k * aj_budget_exponent(params.alpha, params.epsilon));
    const int count = std::max(1, static_cast<int>(std::ceil(budget)));
    CoverFamily fam;
    fam.level = k;
    fam.provenance = Provenance::A_j;
    // half uniform, half clustered in one corner ball: saturated cardinality
    // with an adversarial concentration
    const Vec3 cluster(0.2 * period, 0.2 * period, 0.2 * period);
    for (int i = 0; i < count; ++i) {
      Cube q{Vec3(unif(rng), unif(rng), unif(rng)), k, params.epsilon, period};
      if (i % 2 == 1) {
        for (int ax = 0; ax < 3; ++ax) {
          q.center[ax] = cluster[ax] + 0.05 * period * (2 * unif(rng) / period - 1);
          q.center[ax] = std::fmod(std::fmod(q.center[ax], period) + period, period);
        }
      }
      fam.cubes.push_back(q);
    }
    fam.cardinality_budget = budget;
    fam.measured_c = fam.cubes.size() / budget;
    families.emplace(k, std::move(fam));
  }
  return families;
}

}  // namespace pkrg
