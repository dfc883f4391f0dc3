// pkrg: hyperdissipative Navier-Stokes runs on the periodic box and the
// packet/cover/dimension analysis pipeline built on top of them.
//
// Subcommands: solve, analyze, cover, dimension, verify, report, run.
// Exit codes: 0 ok, 1 numeric failure, 2 usage error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pkrg/pipeline.hpp"
#include "pkrg/reports.hpp"
#include "pkrg/verify.hpp"

namespace fs = std::filesystem;
using namespace pkrg;

namespace {

PipelineConfig config_for_run_dir(const std::string& run_dir) {
  const fs::path p = fs::path(run_dir) / "config.json";
  if (!fs::exists(p))
    throw std::runtime_error("no config.json under " + run_dir + " (run `pkrg solve` first)");
  PipelineConfig cfg = load_config(p.string());
  cfg.out_dir = run_dir;
  return cfg;
}

int run_stages(PipelineConfig cfg, std::vector<std::string> stages) {
  cfg.stages = std::move(stages);
  const RunManifest manifest = run_pipeline(cfg);
  for (const auto& s : manifest.stages) {
    std::cout << "stage " << s.name << ": " << s.wall_seconds << " s\n";
    for (const auto& [path, digest] : s.artifacts)
      std::cout << "  " << path << "  " << digest << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pkrg: spectral Navier-Stokes runs and packet/cover/dimension analysis"};
  app.require_subcommand(1);

  // --- solve ---
  auto* solve = app.add_subcommand("solve", "integrate and write energy.csv + checkpoints");
  PipelineConfig scfg;
  std::string ic_name = "taylor-green";
  solve->add_option("--alpha", scfg.solver.alpha, "dissipation exponent in (1, 3/2]");
  solve->add_option("--epsilon", scfg.epsilon, "cube scaling epsilon");
  solve->add_option("--n", scfg.solver.n, "grid points per axis");
  solve->add_option("--dt", scfg.solver.dt, "time step");
  solve->add_option("--t-end", scfg.solver.t_end, "final time");
  solve->add_option("--ic", ic_name, "taylor-green | random-band | <path>.pkrg");
  solve->add_option("--seed", scfg.solver.seed, "rng seed")->envname("PKRG_SEED");
  std::string scheme = "integrating-factor-rk4", dealias = "two-thirds";
  solve->add_option("--scheme", scheme, "integrating-factor-rk4 | imex-euler");
  solve->add_option("--dealias", dealias, "two-thirds | padded");
  solve->add_option("--snapshot-every", scfg.solver.snapshot_every, "steps between snapshots");
  solve->add_option("--out", scfg.out_dir, "output directory")->envname("PKRG_OUT");
  solve->add_option("--threads", scfg.threads, "worker cap")->envname("PKRG_THREADS");

  // --- analyze ---
  auto* analyze = app.add_subcommand("analyze", "packet series and estimate terms");
  std::string analyze_run = "run";
  int analyze_level = -1;
  std::vector<int> analyze_bands;
  analyze->add_option("--run", analyze_run, "run directory")->required();
  analyze->add_option("--level", analyze_level, "cube lattice level");
  analyze->add_option("--bands", analyze_bands, "bands to track");

  // --- cover ---
  auto* cover = app.add_subcommand("cover", "classify cubes and build the cover families");
  std::string cover_run = "run";
  int cover_j = -1;
  double cover_eta = -1;
  std::string window;
  cover->add_option("--run", cover_run, "run directory")->required();
  cover->add_option("--j", cover_j, "cover level");
  cover->add_option("--eta", cover_eta, "naughtiness density in (0,1)");
  cover->add_option("--window", window, "analysis window lo:hi");

  // --- dimension ---
  auto* dim = app.add_subcommand("dimension", "box-counting estimate from covers.json");
  std::string covers_path;
  double dim_alpha = 1.1;
  std::string dim_out;
  dim->add_option("--covers", covers_path, "covers.json path")->required();
  dim->add_option("--alpha", dim_alpha, "alpha for the closed-form bounds");
  dim->add_option("--out", dim_out, "output directory (default: next to covers.json)");

  // --- verify ---
  auto* ver = app.add_subcommand("verify", "run an invariant suite");
  std::string suite;
  std::string results_path = "verify_results.json";
  ver->add_option("suite", suite, "suite name or 'all'")->required();
  ver->add_option("--results", results_path, "machine-readable results file");

  // --- report ---
  auto* rep = app.add_subcommand("report", "summarize a run directory");
  std::string report_run = "run";
  rep->add_option("--run", report_run, "run directory")->required();

  // --- run (whole pipeline) ---
  auto* runcmd = app.add_subcommand("run", "execute the configured stages");
  std::string config_path;
  runcmd->add_option("--config", config_path, "pipeline config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // --help exits 0; every parse failure is usage error 2
  }

  try {
    if (*solve) {
      if (ic_name == "taylor-green")
        scfg.solver.ic = InitialConditionKind::taylor_green;
      else if (ic_name == "random-band")
        scfg.solver.ic = InitialConditionKind::random_band;
      else {
        scfg.solver.ic = InitialConditionKind::checkpoint;
        scfg.solver.checkpoint_path = ic_name;
      }
      if (scheme == "imex-euler") scfg.solver.scheme = TimeScheme::imex_euler;
      if (dealias == "padded") scfg.solver.dealias = DealiasRule::padded;
      return run_stages(scfg, {"solve"});
    }
    if (*analyze) {
      PipelineConfig cfg = config_for_run_dir(analyze_run);
      if (analyze_level >= 0) cfg.analyze_cube_level = analyze_level;
      if (!analyze_bands.empty()) cfg.analyze_bands = analyze_bands;
      return run_stages(cfg, {"analyze"});
    }
    if (*cover) {
      PipelineConfig cfg = config_for_run_dir(cover_run);
      if (cover_j >= 0) cfg.cover_j = cover_j;
      if (cover_eta > 0) cfg.cover_eta = cover_eta;
      if (!window.empty()) {
        const auto colon = window.find(':');
        if (colon == std::string::npos) throw ConfigError({"--window: expected lo:hi"});
        cfg.window_lo = std::stod(window.substr(0, colon));
        cfg.window_hi = std::stod(window.substr(colon + 1));
        if (!(cfg.window_lo < cfg.window_hi))
          throw ConfigError({"--window: lo must be below hi"});
      }
      return run_stages(cfg, {"cover"});
    }
    if (*dim) {
      std::ifstream is(covers_path);
      if (!is) throw std::runtime_error("cannot open " + covers_path);
      std::stringstream ss;
      ss << is.rdbuf();
      auto [families, params] = covers_from_json(ss.str());
      const fs::path out = dim_out.empty() ? fs::path(covers_path).parent_path() : fs::path(dim_out);
      fs::create_directories(out.empty() ? "." : out);
      for (const auto& [name, fam] : families) {
        if (name.rfind("C_", 0) != 0) continue;
        std::vector<Box> boxes;
        for (const auto& q : fam.cubes) boxes.push_back(box_of(q));
        std::vector<std::pair<Real, long>> counts;
        for (Real r : {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64})
          counts.emplace_back(r, boxes.empty() ? 1 : box_count(boxes, r));
        DimensionEstimate est = estimate_dimension(counts, dim_alpha);
        {
          std::ofstream os(out / "dimension.csv");
          write_dimension_csv(os, est, name);
        }
        {
          std::ofstream os(out / "dimension.json");
          os << dimension_to_json(est, name, 0, 0);
        }
        std::cout << name << ": slope " << est.slope << ", refined bound " << est.bound_refined
                  << "\n";
      }
      return 0;
    }
    if (*ver) {
      std::vector<VerifyResult> results;
      try {
        results = verify(suite);
      } catch (const UnknownSuiteError& e) {
        std::cerr << e.what() << "\n";
        return 2;
      }
      std::ofstream os(results_path);
      os << verify_results_json(results);
      bool all_ok = true;
      for (const auto& r : results) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.suite << ": " << r.details << "\n";
        all_ok = all_ok && r.passed;
      }
      return all_ok ? 0 : 1;
    }
    if (*rep) {
      const fs::path dir(report_run);
      std::ifstream is(dir / "manifest.json");
      if (!is) throw std::runtime_error("no manifest.json under " + report_run);
      std::cout << is.rdbuf() << "\n";
      return 0;
    }
    if (*runcmd) {
      const RunManifest manifest = run_pipeline_file(config_path);
      std::cout << manifest_to_json(manifest) << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
