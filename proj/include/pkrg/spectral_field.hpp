#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "pkrg/frequency_grid.hpp"
#include "pkrg/types.hpp"

namespace pkrg {

struct SymmetryViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Velocity field as complex Fourier coefficients, three components on the
/// same lattice. Hermitian symmetry coeff(-k) = conj(coeff(k)) encodes a real
/// physical field. Fields are plain values; all operations on them are free
/// functions returning new values.
struct SpectralField {
  FrequencyGrid grid;
  std::array<ComplexArray, 3> comp;

  SpectralField() = default;
  explicit SpectralField(const FrequencyGrid& g) : grid(g) {
    for (auto& c : comp) c = ComplexArray::Zero(g.size());
  }
};

/// Real-space samples of a velocity field on the n^3 collocation grid.
struct PhysicalField {
  FrequencyGrid grid;
  std::array<RealArray, 3> comp;

  PhysicalField() = default;
  explicit PhysicalField(const FrequencyGrid& g) : grid(g) {
    for (auto& c : comp) c = RealArray::Zero(g.size());
  }
};

// --- arithmetic -------------------------------------------------------------

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(Real s, const SpectralField& f);
SpectralField& operator+=(SpectralField& a, const SpectralField& b);

// --- norms and inner products ----------------------------------------------

/// L2(torus) norm from coefficients: sqrt(period^3 * sum |c|^2).
Real l2_norm(const SpectralField& f);

/// L2(torus) norm by grid quadrature: sqrt(period^3/n^3 * sum |u(x)|^2).
Real l2_norm(const PhysicalField& f);

/// Lp(torus) norm of the pointwise Euclidean magnitude; p = infinity gives the
/// grid max. Requires p >= 1.
Real lp_norm(const PhysicalField& f, Real p);

/// Real L2 pairing <f, g> = period^3 * Re sum conj(f) g, summed over components.
Real l2_inner(const SpectralField& f, const SpectralField& g);

// --- symmetry and divergence -----------------------------------------------

/// Max over lattice points of |c(-k) - conj(c(k))| (absolute).
Real hermitian_defect(const SpectralField& f);

/// Averages c(k) with conj(c(-k)); afterwards the field is exactly Hermitian.
void hermitian_symmetrize(SpectralField& f);

/// Max over k != 0 of |k . c(k)| / (|k| |c(k)|); 0 for the zero field.
Real divergence_defect(const SpectralField& f);

/// Zeroes every coefficient with any wavevector component equal to n/2.
void zero_nyquist(SpectralField& f);

void zero_mean(SpectralField& f);

// --- deterministic random fields --------------------------------------------

/// I.i.d. complex Gaussian coefficients, symmetrized, Nyquist-zeroed,
/// mean-free, normalized to unit L2 norm.
SpectralField random_hermitian_field(const FrequencyGrid& grid, std::uint64_t seed);

/// Same, but coefficients restricted to |xi| in (band_lo, band_hi).
SpectralField random_shell_field(const FrequencyGrid& grid, std::uint64_t seed, Real band_lo,
                                 Real band_hi);

}  // namespace pkrg
