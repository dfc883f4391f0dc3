#include "pkrg/cutoff.hpp"

#include <cmath>

#include "pkrg/littlewood_paley.hpp"  // smooth_step: same glue as the dyadic h

namespace pkrg {

Real cutoff_profile(Real dist, Real half_plateau, Real half_support) {
  const Real s = std::abs(dist);
  if (s <= half_plateau) return 1.0;
  if (s >= half_support) return 0.0;
  return smooth_step((half_support - s) / (half_support - half_plateau));
}

Real profile_derivative_constant(int k) {
  if (k < 1 || k > 3) throw std::domain_error("profile_derivative_constant: k in {1,2,3}");
  // dense sampling of the unit smooth step, central differences
  static const std::array<Real, 3> constants = [] {
    const int m = 20000;
    const Real h = 1.0 / m;
    std::array<Real, 3> out{};
    auto deriv = [&](int order, Real t) {
      switch (order) {
        case 1:
          return (smooth_step(t + h) - smooth_step(t - h)) / (2 * h);
        case 2:
          return (smooth_step(t + h) - 2 * smooth_step(t) + smooth_step(t - h)) / (h * h);
        default:
          return (smooth_step(t + 2 * h) - 2 * smooth_step(t + h) + 2 * smooth_step(t - h) -
                  smooth_step(t - 2 * h)) /
                 (2 * h * h * h);
      }
    };
    for (int order = 1; order <= 3; ++order) {
      Real sup = 0;
      for (int i = 1; i < m; ++i) sup = std::max(sup, std::abs(deriv(order, i * h)));
      out[order - 1] = sup;
    }
    return out;
  }();
  return constants[k - 1];
}

RealArray cutoff_box_samples(const FrequencyGrid& grid, const Box& plateau) {
  const int n = grid.n();
  const Real period = grid.period();
  const Real dx = period / n;
  const Real half_plateau = plateau.side / 2;
  const Real half_support = 7.0 * plateau.side / 12.0;
  const bool saturated = 2 * half_support >= period;

  // per-axis 1D profiles; the tensor product fills the cube
  std::array<RealArray, 3> axis;
  for (int ax = 0; ax < 3; ++ax) {
    axis[ax].resize(n);
    for (int i = 0; i < n; ++i) {
      if (saturated) {
        axis[ax][i] = 1.0;
        continue;
      }
      const Real d = wrapped_delta(i * dx, plateau.center[ax], period);
      axis[ax][i] = cutoff_profile(d, half_plateau, half_support);
    }
  }

  RealArray out(grid.size());
  Eigen::Index idx = 0;
  for (int i1 = 0; i1 < n; ++i1) {
    const Real a1 = axis[0][i1];
    for (int i2 = 0; i2 < n; ++i2) {
      const Real a12 = a1 * axis[1][i2];
      if (a12 == 0) {
        for (int i3 = 0; i3 < n; ++i3, ++idx) out[idx] = 0.0;
        continue;
      }
      for (int i3 = 0; i3 < n; ++i3, ++idx) out[idx] = a12 * axis[2][i3];
    }
  }
  return out;
}

Cutoff make_cutoff(const Cube& q, const FrequencyGrid& grid) {
  const Real side = cube_side(q);
  const Real dx = grid.period() / grid.n();
  if (side < 8 * dx - 1e-12)
    throw ResolutionError("make_cutoff: cube side " + std::to_string(side) + " is under 8 grid cells");
  Cutoff c;
  c.cube = q;
  c.samples = cutoff_box_samples(grid, box_of(q));

  // grid finite-difference gradient sup, recorded in units of 1/side
  const int n = grid.n();
  Real sup = 0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3) {
        const Real v = c.samples[grid.flat(i1, i2, i3)];
        const Real d1 = c.samples[grid.flat((i1 + 1) % n, i2, i3)] - v;
        const Real d2 = c.samples[grid.flat(i1, (i2 + 1) % n, i3)] - v;
        const Real d3 = c.samples[grid.flat(i1, i2, (i3 + 1) % n)] - v;
        sup = std::max(sup, std::sqrt(d1 * d1 + d2 * d2 + d3 * d3) / dx);
      }
  c.measured_c1 = sup * side;
  return c;
}

std::shared_ptr<const Cutoff> CutoffCache::get(const Cube& q, const FrequencyGrid& grid) {
  Key key{q.center[0], q.center[1], q.center[2], q.level, q.epsilon, grid.n()};
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  auto cutoff = std::make_shared<Cutoff>(make_cutoff(q, grid));
  cache_.emplace(std::move(key), cutoff);
  return cutoff;
}

}  // namespace pkrg
