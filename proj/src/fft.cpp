#include "pkrg/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace pkrg {

namespace {

// FFTW planning is not thread safe; execution on distinct buffers is.
// FFTW_ESTIMATE keeps plan selection deterministic across runs.
struct Plans {
  fftw_plan c2c_fwd = nullptr;
  fftw_plan c2c_bwd = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

Plans& plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, Plans> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  const size_t full = static_cast<size_t>(n) * n * n;
  const size_t half = static_cast<size_t>(n) * n * (n / 2 + 1);
  fftw_complex* ca = fftw_alloc_complex(full);
  fftw_complex* cb = fftw_alloc_complex(full);
  fftw_complex* hc = fftw_alloc_complex(half);
  double* re = fftw_alloc_real(full);

  Plans p;
  p.c2c_fwd = fftw_plan_dft_3d(n, n, n, ca, cb, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.c2c_bwd = fftw_plan_dft_3d(n, n, n, ca, cb, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.r2c = fftw_plan_dft_r2c_3d(n, n, n, re, hc, FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.c2r = fftw_plan_dft_c2r_3d(n, n, n, hc, re, FFTW_ESTIMATE | FFTW_UNALIGNED);

  fftw_free(ca);
  fftw_free(cb);
  fftw_free(hc);
  fftw_free(re);
  return cache.emplace(n, p).first->second;
}

}  // namespace

void dft3(const FrequencyGrid& grid, const ComplexArray& in, ComplexArray& out, bool forward) {
  const int n = grid.n();
  out.resize(grid.size());
  Plans& plans = plans_for(n);
  // std::complex<double> is layout-compatible with fftw_complex.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(forward ? plans.c2c_fwd : plans.c2c_bwd, src, dst);
}

RealArray scalar_to_physical(const FrequencyGrid& grid, const ComplexArray& coeffs) {
  // c2r transform of the stored half spectrum; callers pass Hermitian data
  // (real symbols applied to Hermitian fields), for which this matches the
  // full complex transform's real part.
  const int n = grid.n();
  const int nh = n / 2 + 1;
  ComplexArray half(static_cast<Eigen::Index>(n) * n * nh);
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const Complex* src = coeffs.data() + grid.flat(i1, i2, 0);
      Complex* dst = half.data() + (static_cast<Eigen::Index>(i1) * n + i2) * nh;
      for (int i3 = 0; i3 < nh; ++i3) dst[i3] = src[i3];
    }
  RealArray out(grid.size());
  fftw_execute_dft_c2r(plans_for(n).c2r, reinterpret_cast<fftw_complex*>(half.data()),
                       out.data());
  return out;
}

ComplexArray scalar_to_spectral(const FrequencyGrid& grid, const RealArray& samples) {
  const int n = grid.n();
  const int nh = n / 2 + 1;
  ComplexArray half(static_cast<Eigen::Index>(n) * n * nh);
  fftw_execute_dft_r2c(plans_for(n).r2c, const_cast<double*>(samples.data()),
                       reinterpret_cast<fftw_complex*>(half.data()));
  ComplexArray out(grid.size());
  const Real scale = 1.0 / static_cast<Real>(grid.size());
  for (int i1 = 0; i1 < n; ++i1) {
    const int m1 = i1 == 0 ? 0 : n - i1;
    for (int i2 = 0; i2 < n; ++i2) {
      const int m2 = i2 == 0 ? 0 : n - i2;
      const Complex* src = half.data() + (static_cast<Eigen::Index>(i1) * n + i2) * nh;
      Complex* dst = out.data() + grid.flat(i1, i2, 0);
      for (int i3 = 0; i3 < nh; ++i3) dst[i3] = scale * src[i3];
      const Complex* mrow = half.data() + (static_cast<Eigen::Index>(m1) * n + m2) * nh;
      for (int i3 = nh; i3 < n; ++i3) dst[i3] = scale * std::conj(mrow[n - i3]);
    }
  }
  return out;
}

PhysicalField transform_to_physical(const SpectralField& f, Real hermitian_tol) {
  Real scale = 0;
  for (const auto& c : f.comp) scale = std::max(scale, c.abs().maxCoeff());
  const Real defect = hermitian_defect(f);
  if (defect > hermitian_tol * (1 + scale))
    throw SymmetryViolationError("transform_to_physical: input is not Hermitian (defect " +
                                 std::to_string(defect) + ")");
  PhysicalField u(f.grid);
  for (int c = 0; c < 3; ++c) u.comp[c] = scalar_to_physical(f.grid, f.comp[c]);
  return u;
}

SpectralField transform_to_spectral(const PhysicalField& f) {
  SpectralField out(f.grid);
  for (int c = 0; c < 3; ++c) out.comp[c] = scalar_to_spectral(f.grid, f.comp[c]);
  return out;
}

}  // namespace pkrg
