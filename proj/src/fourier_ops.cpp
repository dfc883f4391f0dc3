#include "pkrg/fourier_ops.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace pkrg {

namespace {

// Per-resolution lattice tables shared by the multiplier ops.
struct Axes {
  RealArray k1, k2, k3;   // wavevector components as reals
  RealArray inv_kk;       // 1/|k|^2, zero at the origin
  RealArray mask_23;      // 0/1: all |k_i| <= n/3
  RealArray mask_nyq;     // 0/1: no component equal to n/2
};

const Axes& axes_for(int n) {
  static std::mutex mutex;
  static std::map<int, Axes> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  Axes a;
  const Eigen::Index size = static_cast<Eigen::Index>(n) * n * n;
  a.k1.resize(size);
  a.k2.resize(size);
  a.k3.resize(size);
  a.inv_kk.resize(size);
  a.mask_23.resize(size);
  a.mask_nyq.resize(size);
  const int cut = n / 3;
  const int ny = n / 2;
  Eigen::Index idx = 0;
  for (int i1 = 0; i1 < n; ++i1) {
    const int k1 = i1 <= n / 2 ? i1 : i1 - n;
    for (int i2 = 0; i2 < n; ++i2) {
      const int k2 = i2 <= n / 2 ? i2 : i2 - n;
      for (int i3 = 0; i3 < n; ++i3, ++idx) {
        const int k3 = i3 <= n / 2 ? i3 : i3 - n;
        a.k1[idx] = k1;
        a.k2[idx] = k2;
        a.k3[idx] = k3;
        const Real kk = Real(k1) * k1 + Real(k2) * k2 + Real(k3) * k3;
        a.inv_kk[idx] = kk == 0 ? 0.0 : 1.0 / kk;
        a.mask_23[idx] =
            (std::abs(k1) > cut || std::abs(k2) > cut || std::abs(k3) > cut) ? 0.0 : 1.0;
        a.mask_nyq[idx] = (i1 == ny || i2 == ny || i3 == ny) ? 0.0 : 1.0;
      }
    }
  }
  return cache.emplace(n, std::move(a)).first->second;
}

}  // namespace

RealArray fractional_laplacian_symbol(const FrequencyGrid& grid, Real alpha) {
  if (alpha < 0) throw std::domain_error("fractional_laplacian: alpha must be >= 0");
  if (alpha == 0) return RealArray::Ones(grid.size());
  const Real scale = kTwoPi / grid.period();
  // (2 pi |k| / period)^(2 alpha) = (scale^2 |k|^2)^alpha
  return (grid.kk() * scale * scale).pow(alpha);
}

SpectralField fractional_laplacian(const SpectralField& f, Real alpha) {
  const RealArray symbol = fractional_laplacian_symbol(f.grid, alpha);
  SpectralField r(f.grid);
  for (int c = 0; c < 3; ++c) r.comp[c] = f.comp[c] * symbol;
  return r;
}

SpectralField leray_project(const SpectralField& f) {
  const Axes& ax = axes_for(f.grid.n());
  SpectralField r(f.grid);
  ComplexArray q =
      (f.comp[0] * ax.k1 + f.comp[1] * ax.k2 + f.comp[2] * ax.k3) * ax.inv_kk;
  r.comp[0] = f.comp[0] - ax.k1 * q;
  r.comp[1] = f.comp[1] - ax.k2 * q;
  r.comp[2] = f.comp[2] - ax.k3 * q;
  return r;
}

SpectralField derivative(const SpectralField& f, int axis) {
  if (axis < 0 || axis > 2) throw std::domain_error("derivative: axis must be 0, 1 or 2");
  const Axes& ax = axes_for(f.grid.n());
  const RealArray& k = axis == 0 ? ax.k1 : (axis == 1 ? ax.k2 : ax.k3);
  const Complex unit(0, kTwoPi / f.grid.period());
  SpectralField r(f.grid);
  for (int c = 0; c < 3; ++c) r.comp[c] = unit * (f.comp[c] * k);
  return r;
}

void dealias_two_thirds(SpectralField& f) {
  const RealArray& mask = axes_for(f.grid.n()).mask_23;
  for (int c = 0; c < 3; ++c) f.comp[c] *= mask;
}

void zero_nyquist(SpectralField& f) {
  const RealArray& mask = axes_for(f.grid.n()).mask_nyq;
  for (int c = 0; c < 3; ++c) f.comp[c] *= mask;
}

namespace detail {

const RealArray& wavevector_axis(const FrequencyGrid& grid, int axis) {
  const Axes& ax = axes_for(grid.n());
  return axis == 0 ? ax.k1 : (axis == 1 ? ax.k2 : ax.k3);
}

}  // namespace detail

ComplexArray pad_spectrum(const FrequencyGrid& coarse, const ComplexArray& coeffs,
                          const FrequencyGrid& fine) {
  if (fine.n() < coarse.n()) throw std::invalid_argument("pad_spectrum: target grid is coarser");
  ComplexArray out = ComplexArray::Zero(fine.size());
  const int n = coarse.n();
  const int m = fine.n();
  for (int i1 = 0; i1 < n; ++i1) {
    const int k1 = coarse.freq(i1);
    const int o1 = k1 >= 0 ? k1 : k1 + m;
    for (int i2 = 0; i2 < n; ++i2) {
      const int k2 = coarse.freq(i2);
      const int o2 = k2 >= 0 ? k2 : k2 + m;
      for (int i3 = 0; i3 < n; ++i3) {
        const int k3 = coarse.freq(i3);
        const int o3 = k3 >= 0 ? k3 : k3 + m;
        out[fine.flat(o1, o2, o3)] = coeffs[coarse.flat(i1, i2, i3)];
      }
    }
  }
  return out;
}

SpectralField pad_spectrum(const SpectralField& f, const FrequencyGrid& fine) {
  SpectralField r(fine);
  for (int c = 0; c < 3; ++c) r.comp[c] = pad_spectrum(f.grid, f.comp[c], fine);
  return r;
}

ComplexArray truncate_spectrum(const FrequencyGrid& fine, const ComplexArray& coeffs,
                               const FrequencyGrid& coarse) {
  if (coarse.n() > fine.n())
    throw std::invalid_argument("truncate_spectrum: target grid is finer");
  ComplexArray out(coarse.size());
  const int n = coarse.n();
  const int m = fine.n();
  for (int i1 = 0; i1 < n; ++i1) {
    const int k1 = coarse.freq(i1);
    const int o1 = k1 >= 0 ? k1 : k1 + m;
    for (int i2 = 0; i2 < n; ++i2) {
      const int k2 = coarse.freq(i2);
      const int o2 = k2 >= 0 ? k2 : k2 + m;
      for (int i3 = 0; i3 < n; ++i3) {
        const int k3 = coarse.freq(i3);
        const int o3 = k3 >= 0 ? k3 : k3 + m;
        out[coarse.flat(i1, i2, i3)] = coeffs[fine.flat(o1, o2, o3)];
      }
    }
  }
  return out;
}

SpectralField truncate_spectrum(const SpectralField& f, const FrequencyGrid& coarse) {
  SpectralField r(coarse);
  for (int c = 0; c < 3; ++c) r.comp[c] = truncate_spectrum(f.grid, f.comp[c], coarse);
  return r;
}

}  // namespace pkrg
