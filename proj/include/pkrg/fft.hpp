#pragma once

#include "pkrg/spectral_field.hpp"

namespace pkrg {

// Transform convention: the forward transform carries the 1/n^3 factor,
//   c(k) = n^-3 sum_x u(x) exp(-2 pi i k.x / period),
// so a single coefficient c(k) = A is the plane wave A exp(2 pi i k.x/period)
// and Parseval reads period^3/n^3 sum|u(x)|^2 = period^3 sum|c(k)|^2.

/// Unnormalized scalar transforms on the flat lattice (FFTW layout).
void dft3(const FrequencyGrid& grid, const ComplexArray& in, ComplexArray& out, bool forward);

/// Inverse transform of a Hermitian field; throws SymmetryViolationError if
/// the input is not Hermitian to within hermitian_tol (absolute, relative to
/// the largest coefficient).
PhysicalField transform_to_physical(const SpectralField& f, Real hermitian_tol = 1e-10);

SpectralField transform_to_spectral(const PhysicalField& f);

/// Scalar helpers used by the analysis modules (no symmetry check).
RealArray scalar_to_physical(const FrequencyGrid& grid, const ComplexArray& coeffs);
ComplexArray scalar_to_spectral(const FrequencyGrid& grid, const RealArray& samples);

}  // namespace pkrg
