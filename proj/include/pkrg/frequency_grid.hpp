#pragma once

#include <memory>
#include <stdexcept>

#include "pkrg/types.hpp"

namespace pkrg {

/// Integer wavevector lattice of the periodic box [0, period)^3.
///
/// Each wavevector component lies in (-n/2, n/2]. Storage index i on one axis
/// maps to the frequency i <= n/2 ? i : i - n, so flat index order matches the
/// usual unshifted DFT layout (row-major, first axis slowest). The continuous
/// frequency of lattice point k is xi = k / period.
class FrequencyGrid {
 public:
  FrequencyGrid() = default;

  explicit FrequencyGrid(int n_per_axis, Real period = 1.0) {
    if (n_per_axis < 16 || n_per_axis % 2 != 0)
      throw std::invalid_argument("FrequencyGrid: n_per_axis must be even and >= 16");
    if (!(period > 0))
      throw std::invalid_argument("FrequencyGrid: period must be positive");
    n_ = n_per_axis;
    period_ = period;
    tables_ = table_for(n_per_axis);
  }

  int n() const { return n_; }
  Real period() const { return period_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(n_) * n_ * n_; }
  int nyquist() const { return n_ / 2; }

  /// |k|^2 at every lattice point (integer wavevectors, no period scaling).
  const RealArray& kk() const { return tables_->kk; }

  /// |xi| = |k| / period at every lattice point.
  RealArray abs_xi() const { return tables_->kk.sqrt() / period_; }

  int freq(int axis_index) const { return axis_index <= n_ / 2 ? axis_index : axis_index - n_; }

  Eigen::Index flat(int i1, int i2, int i3) const {
    return (static_cast<Eigen::Index>(i1) * n_ + i2) * n_ + i3;
  }

  Vec3i wavevector(Eigen::Index flat_index) const {
    const int i3 = static_cast<int>(flat_index % n_);
    const int i2 = static_cast<int>((flat_index / n_) % n_);
    const int i1 = static_cast<int>(flat_index / (static_cast<Eigen::Index>(n_) * n_));
    return Vec3i(freq(i1), freq(i2), freq(i3));
  }

  /// Storage index of the conjugate partner -k (mod n on every axis).
  Eigen::Index mirror(Eigen::Index flat_index) const {
    const int i3 = static_cast<int>(flat_index % n_);
    const int i2 = static_cast<int>((flat_index / n_) % n_);
    const int i1 = static_cast<int>(flat_index / (static_cast<Eigen::Index>(n_) * n_));
    const int m1 = i1 == 0 ? 0 : n_ - i1;
    const int m2 = i2 == 0 ? 0 : n_ - i2;
    const int m3 = i3 == 0 ? 0 : n_ - i3;
    return flat(m1, m2, m3);
  }

  bool operator==(const FrequencyGrid& o) const { return n_ == o.n_ && period_ == o.period_; }
  bool operator!=(const FrequencyGrid& o) const { return !(*this == o); }

 private:
  struct Tables {
    RealArray kk;
  };

  static std::shared_ptr<const Tables> table_for(int n);

  int n_ = 0;
  Real period_ = 1.0;
  std::shared_ptr<const Tables> tables_;
};

}  // namespace pkrg
