#pragma once

#include <complex>

#include <Eigen/Core>

namespace pkrg {

using Real = double;
using Complex = std::complex<Real>;

// Flat lattice storage, row-major over (k1, k2, k3) with k1 slowest.
using RealArray = Eigen::ArrayX<Real>;
using ComplexArray = Eigen::ArrayX<Complex>;

using Vec3 = Eigen::Vector3d;
using Vec3i = Eigen::Vector3i;

inline constexpr Real kPi = 3.14159265358979323846;
inline constexpr Real kTwoPi = 2.0 * kPi;

}  // namespace pkrg
