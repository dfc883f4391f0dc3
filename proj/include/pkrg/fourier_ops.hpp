#pragma once

#include "pkrg/spectral_field.hpp"

namespace pkrg {

/// (-Laplace)^alpha as the multiplier (2 pi |k| / period)^(2 alpha).
/// alpha = 0 is the identity; for alpha > 0 the zero mode is annihilated.
/// Throws std::domain_error for alpha < 0.
SpectralField fractional_laplacian(const SpectralField& f, Real alpha);

/// Multiplier array of the fractional Laplacian on a grid.
RealArray fractional_laplacian_symbol(const FrequencyGrid& grid, Real alpha);

/// Leray projection: c(k) -> c(k) - k (k.c(k)) / |k|^2, identity on the mean.
SpectralField leray_project(const SpectralField& f);

/// d/dx_axis as the multiplier i 2 pi k_axis / period.
SpectralField derivative(const SpectralField& f, int axis);

/// Zeroes every mode with any |k_i| > n/3 (sharp 2/3-rule mask).
void dealias_two_thirds(SpectralField& f);

/// Embeds coefficients into a finer lattice (same period); inverse of
/// truncate_spectrum on the shared modes.
SpectralField pad_spectrum(const SpectralField& f, const FrequencyGrid& fine);
ComplexArray pad_spectrum(const FrequencyGrid& coarse, const ComplexArray& coeffs,
                          const FrequencyGrid& fine);

/// Keeps only the modes representable on the coarser lattice.
SpectralField truncate_spectrum(const SpectralField& f, const FrequencyGrid& coarse);
ComplexArray truncate_spectrum(const FrequencyGrid& fine, const ComplexArray& coeffs,
                               const FrequencyGrid& coarse);

namespace detail {
/// Cached lattice table of one wavevector component (reals, DFT layout).
const RealArray& wavevector_axis(const FrequencyGrid& grid, int axis);
}  // namespace detail

}  // namespace pkrg
