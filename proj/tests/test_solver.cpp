#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "pkrg/checkpoint.hpp"
#include "pkrg/fourier_ops.hpp"
#include "pkrg/solver.hpp"

using namespace pkrg;

namespace {

SpectralField shear_mode(const FrequencyGrid& g, Real amp = 1.0) {
  // u = (amp sin(2 pi x2), 0, 0): single |k| = 1 mode, exactly divergence-free,
  // and its nonlinear term vanishes identically.
  SpectralField f(g);
  f.comp[0][g.flat(0, 1, 0)] = Complex(0, -amp / 2);
  f.comp[0][g.flat(0, g.n() - 1, 0)] = Complex(0, amp / 2);
  return f;
}

SolverConfig small_config() {
  SolverConfig cfg;
  cfg.alpha = 1.1;
  cfg.n = 16;
  cfg.dt = 1e-3;
  cfg.t_end = 0.02;
  cfg.snapshot_every = 5;
  return cfg;
}

}  // namespace

TEST_CASE("config validation") {
  SolverConfig cfg = small_config();
  CHECK_NOTHROW(cfg.validate());
  SUBCASE("alpha range") {
    cfg.alpha = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.alpha = 1.51;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.alpha = 1.5;
    CHECK_NOTHROW(cfg.validate());
  }
  SUBCASE("dt and n") {
    cfg.dt = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_config();
    cfg.n = 14;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
  SUBCASE("imex stiffness cap") {
    cfg.scheme = TimeScheme::imex_euler;
    cfg.dt = 1e-3;
    CHECK_NOTHROW(cfg.validate());
    cfg.dt = 10.0;
    cfg.n = 64;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
}

TEST_CASE("zero field stays zero") {
  SolverConfig cfg = small_config();
  FrequencyGrid g(cfg.n);
  SpectralField u(g);
  SpectralField next = step(u, cfg);
  for (int c = 0; c < 3; ++c) CHECK(next.comp[c].abs().maxCoeff() == 0.0);
}

TEST_CASE("shear mode decays by the exact integrating factor") {
  SolverConfig cfg = small_config();
  FrequencyGrid g(cfg.n);
  SpectralField u = shear_mode(g);
  CHECK(divergence_defect(u) == 0.0);

  // nonlinear term vanishes identically for the shear profile
  SpectralField nl = nonlinear_term(u, cfg.dealias);
  for (int c = 0; c < 3; ++c) CHECK(nl.comp[c].abs().maxCoeff() < 1e-16);

  SpectralField v = u;
  const int n_steps = 20;
  for (int s = 0; s < n_steps; ++s) v = step(v, cfg);
  const Real factor = std::exp(-std::pow(kTwoPi, 2 * cfg.alpha) * cfg.dt * n_steps);
  const Complex expect = u.comp[0][g.flat(0, 1, 0)] * factor;
  CHECK(std::abs(v.comp[0][g.flat(0, 1, 0)] - expect) < 1e-13 * std::abs(expect) + 1e-16);
}

TEST_CASE("shear energy ledger closes to rounding") {
  SolverConfig cfg = small_config();
  cfg.n = 16;
  cfg.t_end = 0.05;
  cfg.ic = InitialConditionKind::random_band;  // replaced below by shear via checkpoint
  FrequencyGrid g(cfg.n);
  SpectralField u = shear_mode(g);
  const char* path = "shear_ic.pkrg";
  save_checkpoint(path, u, 0.0, cfg.alpha);
  cfg.ic = InitialConditionKind::checkpoint;
  cfg.checkpoint_path = path;

  Trajectory tr = run(cfg);
  EnergyReport rep = energy_check(tr);
  // pure decay: exact-linear quadrature makes the defect rounding-level
  CHECK(std::abs(rep.worst_defect) < 1e-12);
  std::remove(path);
}

TEST_CASE("taylor-green run: energy non-increasing, divergence-free, mean zero") {
  SolverConfig cfg = small_config();
  cfg.n = 32;
  cfg.t_end = 0.03;
  Trajectory tr = run(cfg);

  Real prev = std::numeric_limits<Real>::max();
  for (const auto& e : tr.energy) {
    CHECK(e.energy <= prev * (1 + 1e-12));
    prev = e.energy;
  }
  for (const auto& [t, u] : tr.snapshots) {
    CHECK(divergence_defect(u) <= 1e-10);
    for (int c = 0; c < 3; ++c) CHECK(std::abs(u.comp[c][0]) == 0.0);
  }

  EnergyReport rep = energy_check(tr);
  CHECK(rep.worst_defect <= 1e-6);
}

TEST_CASE("t_end = 0 gives only the initial snapshot") {
  SolverConfig cfg = small_config();
  cfg.t_end = 0;
  Trajectory tr = run(cfg);
  CHECK(tr.snapshots.size() == 1);
  CHECK(tr.energy.size() == 1);
  CHECK(energy_check(tr).worst_defect == 0.0);
}

TEST_CASE("identical seeds give bit-identical energy series") {
  SolverConfig cfg = small_config();
  cfg.ic = InitialConditionKind::random_band;
  cfg.seed = 77;
  cfg.t_end = 0.01;
  Trajectory a = run(cfg);
  Trajectory b = run(cfg);
  REQUIRE(a.energy.size() == b.energy.size());
  for (std::size_t i = 0; i < a.energy.size(); ++i) {
    CHECK(a.energy[i].energy == b.energy[i].energy);
    CHECK(a.energy[i].dissipation == b.energy[i].dissipation);
  }
}

TEST_CASE("blow-up detection carries time and band") {
  SolverConfig cfg = small_config();
  cfg.blowup_ceiling = 1e-9;  // absurdly low ceiling to trigger the error path
  FrequencyGrid g(cfg.n);
  SpectralField u = shear_mode(g);
  try {
    (void)step(u, cfg);
    FAIL("expected BlowUpError");
  } catch (const BlowUpError& e) {
    CHECK(e.time == doctest::Approx(cfg.dt));
    CHECK(e.band >= 1);
  }
}

TEST_CASE("rk4 order on a nonlinear run") {
  // halving dt must shrink the final-state error ~16x (4th order); measured
  // against a dt/4 reference
  SolverConfig cfg = small_config();
  cfg.n = 16;
  auto final_state = [&](Real dt) {
    SolverConfig c = cfg;
    c.dt = dt;
    c.t_end = 0.02;
    c.snapshot_every = 1000000;
    return run(c).snapshots.back().second;
  };
  SpectralField ref = final_state(2.5e-4);
  SpectralField coarse = final_state(2e-3);
  SpectralField fine = final_state(1e-3);
  auto err = [&](const SpectralField& s) {
    Real m = 0;
    for (int c = 0; c < 3; ++c) m = std::max(m, (s.comp[c] - ref.comp[c]).abs().maxCoeff());
    return m;
  };
  const Real ratio = err(coarse) / err(fine);
  CHECK(ratio > 8.0);
  CHECK(ratio < 40.0);
}

TEST_CASE("imex scheme also decays the shear mode") {
  SolverConfig cfg = small_config();
  cfg.scheme = TimeScheme::imex_euler;
  FrequencyGrid g(cfg.n);
  SpectralField u = shear_mode(g);
  SpectralField v = step(u, cfg);
  const Real nu = std::pow(kTwoPi, 2 * cfg.alpha);
  const Real expect = 0.5 / (1 + cfg.dt * nu);  // implicit Euler gain on |c|
  CHECK(std::abs(v.comp[0][g.flat(0, 1, 0)]) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("checkpoint byte layout is pinned") {
  FrequencyGrid g(16);
  SpectralField u(g);
  u.comp[0][g.flat(1, 2, 3)] = Complex(0.5, -0.25);
  const char* path = "layout.pkrg";
  save_checkpoint(path, u, 2.5, 1.125);

  std::ifstream is(path, std::ios::binary);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());
  REQUIRE(bytes.size() == 4 + 4 + 4 + 8 + 8 + 8 + 3u * 16 * 16 * 16 * 8);
  CHECK(std::memcmp(bytes.data(), "PKRG", 4) == 0);
  std::uint32_t version, n;
  std::memcpy(&version, bytes.data() + 4, 4);
  std::memcpy(&n, bytes.data() + 8, 4);
  CHECK(version == 1);
  CHECK(n == 16);
  double period, time, alpha;
  std::memcpy(&period, bytes.data() + 12, 8);
  std::memcpy(&time, bytes.data() + 20, 8);
  std::memcpy(&alpha, bytes.data() + 28, 8);
  CHECK(period == 1.0);
  CHECK(time == 2.5);
  CHECK(alpha == 1.125);
  // coefficient block: complex64 row-major, component 0 first
  const std::size_t idx = static_cast<std::size_t>(g.flat(1, 2, 3));
  float re, im;
  std::memcpy(&re, bytes.data() + 36 + 8 * idx, 4);
  std::memcpy(&im, bytes.data() + 36 + 8 * idx + 4, 4);
  CHECK(re == 0.5f);
  CHECK(im == -0.25f);
  std::remove(path);
}

TEST_CASE("checkpoint round trip preserves header and coefficients") {
  FrequencyGrid g(16);
  SpectralField u = random_hermitian_field(g, 5);
  const char* path = "roundtrip.pkrg";
  save_checkpoint(path, u, 0.625, 1.125);
  Checkpoint cp = load_checkpoint(path);
  CHECK(cp.time == 0.625);
  CHECK(cp.alpha == 1.125);
  CHECK(cp.field.grid.n() == 16);
  // complex64 storage: expect float roundoff, not exact doubles
  Real worst = 0;
  for (int c = 0; c < 3; ++c)
    worst = std::max(worst, (cp.field.comp[c] - u.comp[c]).abs().maxCoeff());
  CHECK(worst < 1e-7);
  CHECK(worst > 0);
  std::remove(path);

  CHECK_THROWS_AS(load_checkpoint("does_not_exist.pkrg"), CheckpointError);
}
