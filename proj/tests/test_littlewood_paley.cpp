#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pkrg/fft.hpp"
#include "pkrg/fourier_ops.hpp"
#include "pkrg/littlewood_paley.hpp"

using namespace pkrg;

namespace {

Real max_abs_diff(const SpectralField& a, const SpectralField& b) {
  Real m = 0;
  for (int c = 0; c < 3; ++c) m = std::max(m, (a.comp[c] - b.comp[c]).abs().maxCoeff());
  return m;
}

SpectralField cosine_mode(const FrequencyGrid& g, int k1) {
  SpectralField f(g);
  f.comp[0][g.flat(k1, 0, 0)] = Complex(0.5, 0);
  f.comp[0][g.flat(g.n() - k1, 0, 0)] = Complex(0.5, 0);
  return f;
}

}  // namespace

TEST_CASE("smooth step plateau values") {
  CHECK(bump_h(0.5) == 1.0);
  CHECK(bump_h(1.0) == 1.0);
  CHECK(bump_h(3.0) == 0.0);
  CHECK(bump_h(2.0) == 0.0);
  // midpoint of the glue: exp(-1/t) symmetry forces exactly 1/2
  CHECK(bump_h(1.5) == doctest::Approx(0.5).epsilon(1e-15));
  // monotone nonincreasing through the transition
  Real prev = 1.0;
  for (Real x = 1.0; x <= 2.0; x += 1.0 / 512) {
    const Real v = bump_h(x);
    CHECK(v <= prev + 1e-15);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
}

TEST_CASE("annulus profile support") {
  CHECK(band_profile(0.0) == 0.0);
  CHECK(band_profile(0.5) == 0.0);
  CHECK(band_profile(2.0) == 0.0);
  CHECK(band_profile(1.0) == 1.0);  // h(1) - h(2) = 1
  CHECK(band_profile(1.4) > 0.0);
}

TEST_CASE("resolved band range") {
  CHECK(resolved_bands(FrequencyGrid(32)) == std::pair<int, int>{1, 3});
  CHECK(resolved_bands(FrequencyGrid(64)) == std::pair<int, int>{1, 4});
  CHECK(resolved_bands(FrequencyGrid(128)) == std::pair<int, int>{1, 5});
}

TEST_CASE("symbol support and range") {
  FrequencyGrid g(64);
  const RealArray xi = g.abs_xi();
  const auto [j_min, j_max] = resolved_bands(g);
  for (int j = j_min; j <= j_max; ++j) {
    RealArray s = band_symbol(g, BandSelector::single(j));
    const Real lo = std::pow(2.0, j - 1), hi = std::pow(2.0, j + 1);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      CHECK(s[i] >= 0.0);
      CHECK(s[i] <= 1.0);
      if (xi[i] <= lo || xi[i] >= hi) CHECK(s[i] == 0.0);
    }
  }
}

TEST_CASE("support separation: p_j p_k = 0 for |j-k| >= 2") {
  FrequencyGrid g(64);
  for (int j = 1; j <= 4; ++j)
    for (int k = 1; k <= 4; ++k) {
      if (std::abs(j - k) < 2) continue;
      const RealArray prod = band_symbol(g, BandSelector::single(j)) *
                             band_symbol(g, BandSelector::single(k));
      CHECK(prod.abs().maxCoeff() == 0.0);
    }
}

TEST_CASE("partition of unity on resolved annulus") {
  CHECK(partition_defect(FrequencyGrid(32)) <= 1e-12);
  CHECK(partition_defect(FrequencyGrid(64)) <= 1e-12);
}

TEST_CASE("single mode band membership") {
  FrequencyGrid g(64);
  const int j = 2;
  SpectralField f = cosine_mode(g, 4);  // |xi| = 4 = 2^j exactly
  SpectralField in_band = project(f, BandSelector::single(j));
  // p_j(2^j) = p(1) = h(1) - h(2) = 1
  CHECK(max_abs_diff(in_band, f) < 1e-15);
  SpectralField far = project(f, BandSelector::single(j + 3));
  for (int c = 0; c < 3; ++c) CHECK(far.comp[c].abs().maxCoeff() == 0.0);
}

TEST_CASE("sum of resolved bands reproduces a shell-limited field") {
  FrequencyGrid g(64);
  const auto [j_min, j_max] = resolved_bands(g);
  SpectralField f = random_shell_field(g, 99, std::pow(2.0, j_min), std::pow(2.0, j_max));
  SpectralField sum(g);
  for (int j = j_min; j <= j_max; ++j) sum += project(f, BandSelector::single(j));
  CHECK(max_abs_diff(sum, f) <= 1e-12);
}

TEST_CASE("leq + geq telescopes to the identity") {
  FrequencyGrid g(32);
  SpectralField f = random_hermitian_field(g, 12);
  SpectralField sum = project(f, BandSelector::leq(3)) + project(f, BandSelector::geq(4));
  CHECK(max_abs_diff(sum, f) <= 1e-13);
}

TEST_CASE("projections commute with other multipliers") {
  FrequencyGrid g(32);
  SpectralField f = random_hermitian_field(g, 23);
  const auto band = BandSelector::single(3);

  SpectralField a = project(fractional_laplacian(f, 1.2), band);
  SpectralField b = fractional_laplacian(project(f, band), 1.2);
  Real scale = 0;
  for (int c = 0; c < 3; ++c) scale = std::max(scale, a.comp[c].abs().maxCoeff());
  CHECK(max_abs_diff(a, b) <= 1e-12 * (1 + scale));

  SpectralField c1 = project(leray_project(f), band);
  SpectralField c2 = leray_project(project(f, band));
  CHECK(max_abs_diff(c1, c2) <= 1e-12);
}

TEST_CASE("band range errors") {
  FrequencyGrid g(32);
  SpectralField f = random_hermitian_field(g, 4);
  CHECK_THROWS_AS(project(f, BandSelector::single(-1)), BandRangeError);
  CHECK_THROWS_AS(project(f, BandSelector::single(band_limit(g) + 1)), BandRangeError);
  CHECK_NOTHROW(project(f, BandSelector::single(band_limit(g))));
}

TEST_CASE("bernstein ratio") {
  FrequencyGrid g(64);

  SUBCASE("p = q gives exactly 1") {
    SpectralField f = random_shell_field(g, 31, 4.0, 16.0);
    CHECK(bernstein_ratio(f, 3, 2, 2) == doctest::Approx(1.0).epsilon(1e-13));
  }

  SUBCASE("p > q rejected") {
    SpectralField f = random_shell_field(g, 31, 4.0, 16.0);
    CHECK_THROWS_AS(bernstein_ratio(f, 3, 4, 2), std::domain_error);
  }

  SUBCASE("pure cosine closed form: 2^{3j/2} ratio = sqrt(2)") {
    const Real inf = std::numeric_limits<Real>::infinity();
    for (int j = 2; j <= 4; ++j) {
      SpectralField f = cosine_mode(g, 1 << j);
      const Real r = bernstein_ratio(f, j, 2, inf);
      CHECK(r * std::pow(2.0, 1.5 * j) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    }
  }

  SUBCASE("ratio is j-stable on random packet superpositions") {
    // The saturating family for Bernstein is localized wave packets, i.e.
    // translates of the band kernel; diffuse shell noise decays like 2^{-3j/2}.
    const Real inf = std::numeric_limits<Real>::infinity();
    FrequencyGrid big(128);
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<Real> unif(0.0, 1.0);
    Real lo = std::numeric_limits<Real>::max(), hi = 0;
    for (int j : {3, 4, 5}) {
      SpectralField f(big);
      const RealArray pj = band_symbol(big, BandSelector::single(j));
      for (int packet = 0; packet < 5; ++packet) {
        const Real a = 0.5 + unif(rng);
        const Vec3 x0(unif(rng), unif(rng), unif(rng));
        for (Eigen::Index i = 0; i < big.size(); ++i) {
          if (pj[i] == 0) continue;
          const Vec3 k = big.wavevector(i).cast<Real>();
          const Real phase = -kTwoPi * k.dot(x0);
          f.comp[0][i] += a * pj[i] * Complex(std::cos(phase), std::sin(phase));
        }
      }
      const Real r = bernstein_ratio(f, j, 2, inf);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(hi <= 2 * lo);
  }

  SUBCASE("ratio on diffuse shell noise stays below a uniform constant") {
    const Real inf = std::numeric_limits<Real>::infinity();
    FrequencyGrid big(128);
    for (int j : {3, 4, 5}) {
      SpectralField f =
          random_shell_field(big, 100 + j, std::pow(2.0, j - 1), std::pow(2.0, j + 1));
      CHECK(bernstein_ratio(f, j, 2, inf) <= 8.0);
    }
  }
}

TEST_CASE("P_j is bounded on L2 and (measured) on Linf") {
  FrequencyGrid g(64);
  Real c_inf_min = std::numeric_limits<Real>::max(), c_inf_max = 0;
  for (int j : {2, 3, 4}) {
    SpectralField f = random_hermitian_field(g, 200 + j);
    SpectralField pf = project(f, BandSelector::single(j));
    CHECK(l2_norm(pf) <= l2_norm(f) * (1 + 1e-13));
    const Real ci = lp_norm(transform_to_physical(pf), std::numeric_limits<Real>::infinity()) /
                    lp_norm(transform_to_physical(f), std::numeric_limits<Real>::infinity());
    c_inf_min = std::min(c_inf_min, ci);
    c_inf_max = std::max(c_inf_max, ci);
    CHECK(ci <= 3.0);
  }
  CHECK(c_inf_max <= 2 * c_inf_min + 0.5);
}
