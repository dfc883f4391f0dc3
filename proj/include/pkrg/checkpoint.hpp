#pragma once

#include <string>

#include "pkrg/spectral_field.hpp"

namespace pkrg {

struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Checkpoint {
  SpectralField field;
  Real time = 0;
  Real alpha = 0;
};

// Binary layout (little-endian):
//   magic "PKRG" | u32 version=1 | u32 n_per_axis | f64 period | f64 time |
//   f64 alpha | coefficients as complex64 (f32 re, f32 im), row-major
//   k-order, components concatenated.
void save_checkpoint(const std::string& path, const SpectralField& f, Real time, Real alpha);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace pkrg
