#include "pkrg/dimension.hpp"

#include <cmath>
#include <numeric>
#include <unordered_set>

namespace pkrg {

namespace {

std::uint64_t pack(long i1, long i2, long i3) {
  return (static_cast<std::uint64_t>(i1) << 42) | (static_cast<std::uint64_t>(i2) << 21) |
         static_cast<std::uint64_t>(i3);
}

long boxes_per_axis(Real r, Real period) {
  return std::max(1L, static_cast<long>(std::ceil(period / r - 1e-12)));
}

}  // namespace

long box_count(const std::vector<Vec3>& points, Real r, Real period) {
  if (!(r > 0)) throw std::domain_error("box_count: r must be positive");
  if (points.empty()) return 0;
  if (r >= period) return 1;
  const long m = boxes_per_axis(r, period);
  std::unordered_set<std::uint64_t> boxes;
  for (const auto& p : points) {
    long idx[3];
    for (int ax = 0; ax < 3; ++ax) {
      Real x = std::fmod(std::fmod(p[ax], period) + period, period);
      idx[ax] = std::min(m - 1, static_cast<long>(std::floor(x / r)));
    }
    boxes.insert(pack(idx[0], idx[1], idx[2]));
  }
  return static_cast<long>(boxes.size());
}

long box_count(const std::vector<Box>& cubes, Real r, Real period) {
  if (!(r > 0)) throw std::domain_error("box_count: r must be positive");
  if (cubes.empty()) return 0;
  if (r >= period) return 1;
  const long m = boxes_per_axis(r, period);
  std::unordered_set<std::uint64_t> boxes;
  for (const auto& b : cubes) {
    long lo[3], hi[3];
    bool full = b.side >= period;
    for (int ax = 0; ax < 3; ++ax) {
      if (full) {
        lo[ax] = 0;
        hi[ax] = m - 1;
        continue;
      }
      const Real a = b.center[ax] - b.side / 2;
      const Real z = b.center[ax] + b.side / 2;
      lo[ax] = static_cast<long>(std::floor(a / r));
      hi[ax] = static_cast<long>(std::floor((z - 1e-15) / r));
    }
    for (long i1 = lo[0]; i1 <= hi[0]; ++i1)
      for (long i2 = lo[1]; i2 <= hi[1]; ++i2)
        for (long i3 = lo[2]; i3 <= hi[2]; ++i3)
          boxes.insert(pack(((i1 % m) + m) % m, ((i2 % m) + m) % m, ((i3 % m) + m) % m));
  }
  return static_cast<long>(boxes.size());
}

DimensionFit fit_dimension(const std::vector<std::pair<Real, long>>& counts) {
  if (counts.size() < 3)
    throw DegenerateScalesError("fit_dimension: need at least 3 scales");
  Real r_min = counts.front().first, r_max = counts.front().first;
  for (const auto& [r, nn] : counts) {
    r_min = std::min(r_min, r);
    r_max = std::max(r_max, r);
    if (nn < 1) throw DegenerateScalesError("fit_dimension: nonpositive count");
  }
  if (r_max / r_min < 4 - 1e-12)
    throw DegenerateScalesError("fit_dimension: scales must span at least 2 octaves");

  const int m = static_cast<int>(counts.size());
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [r, nn] : counts) {
    const Real x = -std::log(r);
    const Real y = std::log(static_cast<Real>(nn));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  DimensionFit fit;
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const Real intercept = (sy - fit.slope * sx) / m;
  Real ss = 0;
  for (const auto& [r, nn] : counts) {
    const Real e = std::log(static_cast<Real>(nn)) - (intercept - fit.slope * std::log(r));
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

Real bound_hausdorff(Real alpha) { return 5 - 4 * alpha; }

Real bound_refined(Real alpha) { return (-16 * alpha * alpha + 16 * alpha + 5) / 3; }

Real bound_naive(Real alpha) {
  return (-64 * alpha * alpha * alpha + 96 * alpha * alpha - 48 * alpha + 35) / 9;
}

Rational make_rational(long long num, long long den) {
  if (den == 0) throw std::domain_error("make_rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  return {num, den};
}

Rational bound_refined_rational(long long p, long long q) {
  // (-16 (p/q)^2 + 16 p/q + 5)/3 = (-16 p^2 + 16 p q + 5 q^2) / (3 q^2)
  return make_rational(-16 * p * p + 16 * p * q + 5 * q * q, 3 * q * q);
}

Rational bound_naive_rational(long long p, long long q) {
  // (-64 (p/q)^3 + 96 (p/q)^2 - 48 p/q + 35)/9
  return make_rational(-64 * p * p * p + 96 * p * p * q - 48 * p * q * q + 35 * q * q * q,
                       9 * q * q * q);
}

DimensionEstimate estimate_dimension(const std::vector<std::pair<Real, long>>& counts,
                                     Real alpha) {
  DimensionEstimate est;
  est.scales = counts;
  const DimensionFit fit = fit_dimension(counts);
  est.slope = fit.slope;
  est.residual = fit.residual;
  est.bound_naive = bound_naive(alpha);
  est.bound_refined = bound_refined(alpha);
  est.bound_hausdorff = bound_hausdorff(alpha);
  return est;
}

std::vector<Vec3> cantor_dust_points(int levels) {
  if (levels < 1) throw std::domain_error("cantor_dust_points: levels must be >= 1");
  std::vector<Real> axis{0.0};
  Real scale = 1.0;
  for (int l = 0; l < levels; ++l) {
    scale /= 3;
    std::vector<Real> next;
    next.reserve(axis.size() * 2);
    for (Real a : axis) {
      next.push_back(a);
      next.push_back(a + 2 * scale);
    }
    axis.swap(next);
  }
  // centers of the level cells
  const Real half = scale / 2;
  std::vector<Vec3> pts;
  pts.reserve(axis.size() * axis.size() * axis.size());
  for (Real x : axis)
    for (Real y : axis)
      for (Real z : axis) pts.emplace_back(x + half, y + half, z + half);
  return pts;
}

}  // namespace pkrg
