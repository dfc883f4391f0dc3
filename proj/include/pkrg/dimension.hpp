#pragma once

#include <cstdint>
#include <vector>

#include "pkrg/cubes.hpp"

namespace pkrg {

struct DegenerateScalesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Grid-anchored box count at scale r: the number of distinct boxes of the
/// lattice r Z^3 met by the set. An upper bound on the minimal covering count
/// (within a factor 8), which leaves the fitted dimension unchanged.
/// For r >= period the count is 1.
long box_count(const std::vector<Vec3>& points, Real r, Real period = 1.0);
long box_count(const std::vector<Box>& cubes, Real r, Real period = 1.0);

struct DimensionFit {
  Real slope = 0;     // fitted d_B
  Real residual = 0;  // rms residual of the log-log fit
};

/// Least-squares slope of log N against -log r. Requires >= 3 scales spanning
/// >= 2 octaves; throws DegenerateScalesError otherwise.
DimensionFit fit_dimension(const std::vector<std::pair<Real, long>>& counts);

// closed-form bounds as functions of alpha
Real bound_hausdorff(Real alpha);  // 5 - 4 alpha
Real bound_refined(Real alpha);    // (-16 a^2 + 16 a + 5)/3
Real bound_naive(Real alpha);      // (-64 a^3 + 96 a^2 - 48 a + 35)/9

/// Exact fraction (normalized, den > 0).
struct Rational {
  long long num = 0;
  long long den = 1;
  bool operator==(const Rational&) const = default;
};

Rational make_rational(long long num, long long den);

/// The bounds evaluated exactly at alpha = a_num/a_den.
Rational bound_refined_rational(long long a_num, long long a_den);
Rational bound_naive_rational(long long a_num, long long a_den);

struct DimensionEstimate {
  std::vector<std::pair<Real, long>> scales;  // (r, N(r))
  Real slope = 0;
  Real residual = 0;
  Real bound_naive = 0;
  Real bound_refined = 0;
  Real bound_hausdorff = 0;
};

DimensionEstimate estimate_dimension(const std::vector<std::pair<Real, long>>& counts,
                                     Real alpha);

/// Centers of the level-`levels` middle-thirds Cantor dust (8^levels points):
/// the self-similar validation set with dimension 3 log 2 / log 3.
std::vector<Vec3> cantor_dust_points(int levels);

}  // namespace pkrg
