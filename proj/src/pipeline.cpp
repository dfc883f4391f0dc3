#include "pkrg/pipeline.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pkrg/checkpoint.hpp"
#include "pkrg/dimension.hpp"
#include "pkrg/estimates.hpp"
#include "pkrg/reports.hpp"

namespace pkrg {

using nlohmann::json;
namespace fs = std::filesystem;

ConfigError::ConfigError(const std::vector<std::string>& problems_in)
    : std::invalid_argument([&] {
        std::string msg = "config rejected:";
        for (const auto& p : problems_in) msg += "\n  " + p;
        return msg;
      }()),
      problems(problems_in) {}

namespace {

Real epsilon_cap(Real alpha) { return std::min((4 * alpha - 4) / 3, 1.0 / 20); }

}  // namespace

PipelineConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("not valid JSON: ") + e.what()});
  }

  PipelineConfig cfg;
  std::vector<std::string> problems;

  auto get = [&](const char* key, auto& target, auto validate) {
    if (!root.contains(key)) return;
    try {
      target = root.at(key).get<std::decay_t<decltype(target)>>();
    } catch (const json::exception&) {
      problems.push_back(std::string(key) + ": wrong type");
      return;
    }
    validate();
  };

  get("alpha", cfg.solver.alpha, [&] {
    if (!(cfg.solver.alpha > 1.0 && cfg.solver.alpha <= 1.5))
      problems.push_back("alpha: must lie in (1, 3/2], got " + std::to_string(cfg.solver.alpha));
  });
  get("epsilon", cfg.epsilon, [&] {
    const Real cap = epsilon_cap(cfg.solver.alpha);
    if (!(cfg.epsilon > 0 && cfg.epsilon < cap))
      problems.push_back("epsilon: must lie in (0, min((4 alpha-4)/3, 1/20)) = (0, " +
                         std::to_string(cap) + "), got " + std::to_string(cfg.epsilon));
  });
  get("n", cfg.solver.n, [&] {
    if (cfg.solver.n < 16 || cfg.solver.n % 2 != 0)
      problems.push_back("n: must be even and >= 16");
  });
  get("dt", cfg.solver.dt, [&] {
    if (!(cfg.solver.dt > 0)) problems.push_back("dt: must be positive");
  });
  get("t_end", cfg.solver.t_end, [&] {
    if (!(cfg.solver.t_end >= 0)) problems.push_back("t_end: must be >= 0");
  });
  get("seed", cfg.solver.seed, [] {});
  get("snapshot_every", cfg.solver.snapshot_every, [&] {
    if (cfg.solver.snapshot_every < 1) problems.push_back("snapshot_every: must be >= 1");
  });
  get("out", cfg.out_dir, [] {});
  get("threads", cfg.threads, [&] {
    if (cfg.threads < 1) problems.push_back("threads: must be >= 1");
  });

  if (root.contains("dealias")) {
    const std::string v = root.at("dealias").get<std::string>();
    if (v == "two-thirds")
      cfg.solver.dealias = DealiasRule::two_thirds;
    else if (v == "padded")
      cfg.solver.dealias = DealiasRule::padded;
    else
      problems.push_back("dealias: expected two-thirds|padded, got " + v);
  }
  if (root.contains("scheme")) {
    const std::string v = root.at("scheme").get<std::string>();
    if (v == "integrating-factor-rk4")
      cfg.solver.scheme = TimeScheme::integrating_factor_rk4;
    else if (v == "imex-euler")
      cfg.solver.scheme = TimeScheme::imex_euler;
    else
      problems.push_back("scheme: expected integrating-factor-rk4|imex-euler, got " + v);
  }
  if (root.contains("ic")) {
    const std::string v = root.at("ic").get<std::string>();
    if (v == "taylor-green")
      cfg.solver.ic = InitialConditionKind::taylor_green;
    else if (v == "random-band")
      cfg.solver.ic = InitialConditionKind::random_band;
    else if (fs::path(v).extension() == ".pkrg") {
      cfg.solver.ic = InitialConditionKind::checkpoint;
      cfg.solver.checkpoint_path = v;
    } else
      problems.push_back("ic: expected taylor-green|random-band|<path>.pkrg, got " + v);
  }
  if (root.contains("stages")) {
    try {
      cfg.stages = root.at("stages").get<std::vector<std::string>>();
    } catch (const json::exception&) {
      problems.push_back("stages: expected a list of stage names");
    }
    for (const auto& s : cfg.stages)
      if (s != "solve" && s != "analyze" && s != "cover" && s != "dimension")
        problems.push_back("stages: unknown stage '" + s + "'");
  }
  if (root.contains("analyze")) {
    const auto& a = root.at("analyze");
    if (a.contains("cube_level")) cfg.analyze_cube_level = a.at("cube_level").get<int>();
    if (a.contains("bands")) cfg.analyze_bands = a.at("bands").get<std::vector<int>>();
  }
  if (root.contains("cover")) {
    const auto& c = root.at("cover");
    if (c.contains("j")) cfg.cover_j = c.at("j").get<int>();
    if (c.contains("eta")) {
      cfg.cover_eta = c.at("eta").get<Real>();
      if (!(cfg.cover_eta > 0 && cfg.cover_eta < 1))
        problems.push_back("cover.eta: must lie in (0, 1)");
    }
    if (c.contains("window")) {
      const auto w = c.at("window").get<std::vector<Real>>();
      if (w.size() != 2 || !(w[0] < w[1]))
        problems.push_back("cover.window: expected [lo, hi] with lo < hi");
      else {
        cfg.window_lo = w[0];
        cfg.window_hi = w[1];
      }
    }
  }

  if (!problems.empty()) throw ConfigError(problems);
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError({"config file not readable: " + path});
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const PipelineConfig& cfg) {
  json root;
  root["alpha"] = cfg.solver.alpha;
  root["epsilon"] = cfg.epsilon;
  root["n"] = cfg.solver.n;
  root["dt"] = cfg.solver.dt;
  root["t_end"] = cfg.solver.t_end;
  root["seed"] = cfg.solver.seed;
  root["snapshot_every"] = cfg.solver.snapshot_every;
  root["dealias"] = cfg.solver.dealias == DealiasRule::two_thirds ? "two-thirds" : "padded";
  root["scheme"] = cfg.solver.scheme == TimeScheme::integrating_factor_rk4
                       ? "integrating-factor-rk4"
                       : "imex-euler";
  switch (cfg.solver.ic) {
    case InitialConditionKind::taylor_green:
      root["ic"] = "taylor-green";
      break;
    case InitialConditionKind::random_band:
      root["ic"] = "random-band";
      break;
    case InitialConditionKind::checkpoint:
      root["ic"] = cfg.solver.checkpoint_path;
      break;
  }
  root["out"] = cfg.out_dir;
  root["threads"] = cfg.threads;
  root["stages"] = cfg.stages;
  root["analyze"] = {{"cube_level", cfg.analyze_cube_level}, {"bands", cfg.analyze_bands}};
  root["cover"] = {{"j", cfg.cover_j},
                   {"eta", cfg.cover_eta},
                   {"window", {cfg.window_lo, cfg.window_hi < 0 ? cfg.solver.t_end : cfg.window_hi}}};
  return root.dump(2);
}

std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_digest(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("file_digest: cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return fnv1a_digest(ss.str());
}

std::string manifest_to_json(const RunManifest& m) {
  json root;
  root["config_digest"] = m.config_digest;
  root["seed"] = m.seed;
  root["tool_version"] = m.tool_version;
  json stages = json::array();
  for (const auto& s : m.stages) {
    json artifacts = json::array();
    for (const auto& [path, digest] : s.artifacts)
      artifacts.push_back({{"path", path}, {"digest", digest}});
    stages.push_back(
        {{"name", s.name}, {"artifacts", std::move(artifacts)}, {"wall_seconds", s.wall_seconds}});
  }
  root["stages"] = std::move(stages);
  return root.dump(2);
}

namespace {

struct PipelineState {
  std::optional<Trajectory> trajectory;
  std::map<std::string, CoverFamily> families;
};

class StageTimer {
 public:
  StageTimer() : start_(std::chrono::steady_clock::now()) {}
  Real seconds() const {
    return std::chrono::duration<Real>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void ensure_trajectory(const PipelineConfig& cfg, PipelineState& state) {
  if (!state.trajectory) state.trajectory = run(cfg.solver);
}

StageRecord stage_solve(const PipelineConfig& cfg, PipelineState& state) {
  StageTimer timer;
  StageRecord rec{"solve", {}, 0};
  ensure_trajectory(cfg, state);
  const Trajectory& tr = *state.trajectory;

  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "energy.csv");
    write_energy_csv(os, tr);
  }
  const auto& [t0, u0] = tr.snapshots.front();
  const auto& [t1, u1] = tr.snapshots.back();
  save_checkpoint((dir / "checkpoint_initial.pkrg").string(), u0, t0, cfg.solver.alpha);
  save_checkpoint((dir / "checkpoint_final.pkrg").string(), u1, t1, cfg.solver.alpha);
  for (const char* name : {"energy.csv", "checkpoint_initial.pkrg", "checkpoint_final.pkrg"}) {
    const std::string p = (dir / name).string();
    rec.artifacts.emplace_back(p, file_digest(p));
  }
  rec.wall_seconds = timer.seconds();
  return rec;
}

StageRecord stage_analyze(const PipelineConfig& cfg, PipelineState& state) {
  StageTimer timer;
  StageRecord rec{"analyze", {}, 0};
  ensure_trajectory(cfg, state);
  const Trajectory& tr = *state.trajectory;
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  // packets at snapshot cadence for a small interior cube set
  const auto lattice = tile_lattice(cfg.analyze_cube_level, cfg.epsilon, cfg.solver.period);
  std::vector<Cube> cubes(lattice.begin(),
                          lattice.begin() + std::min<std::size_t>(4, lattice.size()));

  std::vector<PacketSeries> series;
  std::vector<EstimateTerms> terms;
  const EstimateConfig est_cfg{cfg.solver.alpha, cfg.epsilon, cfg.solver.dealias};
  for (const auto& q : cubes) {
    for (int b : cfg.analyze_bands) {
      PacketSeries s;
      s.cube = q;
      s.band = b;
      for (const auto& [t, u] : tr.snapshots) {
        s.times.push_back(t);
        s.values.push_back(packet_norm(u, q, b));
      }
      for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
        EstimateTerms e = estimate_terms(tr.snapshots[i].second, q, b, est_cfg);
        e.time = s.times[i];
        if (i > 0 && i + 1 < s.times.size()) {
          // centered difference of u_{Q,j}^2 at snapshot cadence
          const Real dt = s.times[i + 1] - s.times[i - 1];
          e.lhs_rate = (s.values[i + 1] * s.values[i + 1] -
                        s.values[i - 1] * s.values[i - 1]) / dt;
        }
        terms.push_back(std::move(e));
      }
      series.push_back(std::move(s));
    }
  }
  {
    std::ofstream os(dir / "packets.csv");
    write_packets_csv(os, series);
  }
  {
    std::ofstream os(dir / "estimates.csv");
    write_estimates_csv(os, terms);
  }
  {
    std::ofstream os(dir / "symbols.csv");
    write_symbol_table_csv(os, FrequencyGrid(cfg.solver.n, cfg.solver.period));
  }
  for (const char* name : {"packets.csv", "estimates.csv", "symbols.csv"}) {
    const std::string p = (dir / name).string();
    rec.artifacts.emplace_back(p, file_digest(p));
  }
  rec.wall_seconds = timer.seconds();
  return rec;
}

StageRecord stage_cover(const PipelineConfig& cfg, PipelineState& state) {
  StageTimer timer;
  StageRecord rec{"cover", {}, 0};
  ensure_trajectory(cfg, state);
  const Trajectory& tr = *state.trajectory;
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  const Real hi = cfg.window_hi < 0 ? cfg.solver.t_end : cfg.window_hi;
  CoverParams params = cfg.cover_params();
  const int j = cfg.cover_j;
  const auto [j_min, j_top] = resolved_bands(FrequencyGrid(cfg.solver.n, cfg.solver.period));
  if (j < j_min || j > j_top)
    throw std::runtime_error("cover level j = " + std::to_string(j) +
                             " outside the resolved bands [" + std::to_string(j_min) + ", " +
                             std::to_string(j_top) + "]");

  std::map<std::string, CoverFamily> families;
  std::map<int, CoverFamily> a_families;
  for (int k = j; k <= j_top; ++k) {
    auto records = classify(tr, k, cfg.window_lo, hi, params);
    std::vector<Cube> bad;
    for (const auto& r : records)
      if (!r.good) bad.push_back(r.cube);
    CoverFamily a_k = vitali_cover(bad, k, params);
    families["A_" + std::to_string(k)] = a_k;
    a_families.emplace(k, std::move(a_k));
  }

  // barrier retries: halve eta up to cover_retries times if no barrier exists
  // for a probe point outside the cover
  NaughtyCoverResult naughty;
  for (int attempt = 0;; ++attempt) {
    naughty = naughty_cover(a_families, j, params);
    std::map<int, std::vector<Cube>> bad_map;
    for (const auto& [k, fam] : a_families) bad_map[k] = fam.cubes;
    std::mt19937_64 rng(cfg.solver.seed + attempt);
    std::uniform_real_distribution<Real> unif(0, cfg.solver.period);
    bool ok = true;
    for (int probe = 0; probe < 8; ++probe) {
      Vec3 x(unif(rng), unif(rng), unif(rng));
      if (family_covers_point(naughty.b_j, x)) continue;
      try {
        (void)barrier_search(x, j, params.epsilon, bad_map, cfg.solver.period);
      } catch (const BarrierNotFoundError&) {
        ok = false;
        break;
      }
    }
    if (ok) break;
    if (attempt >= cfg.cover_retries)
      throw std::runtime_error("cover stage: barrier not found after eta retries");
    params.eta /= 2;
  }
  families["B_" + std::to_string(j)] = naughty.b_j;
  for (const auto& fam : naughty.per_k)
    families["B_" + std::to_string(j) + "_" + std::to_string(fam.k)] = fam;

  // refined family needs B_k for k in [floor(theta j - 10), j]
  std::map<int, CoverFamily> b_families;
  b_families.emplace(j, naughty.b_j);
  for (int k = std::max(1, static_cast<int>(std::floor(
                               theta(params.alpha, params.epsilon) * j - 10)));
       k < j; ++k) {
    std::map<int, CoverFamily> a_sub;
    for (const auto& [kk, fam] : a_families)
      if (kk >= k) a_sub.emplace(kk, fam);
    if (a_sub.empty()) continue;
    NaughtyCoverResult nk = naughty_cover(a_sub, k, params);
    families["B_" + std::to_string(k)] = nk.b_j;
    b_families.emplace(k, std::move(nk.b_j));
  }
  CoverFamily c_j = refined_cover(b_families, j, theta(params.alpha, params.epsilon), params);
  families["C_" + std::to_string(j)] = c_j;

  {
    std::ofstream os(dir / "covers.json");
    os << covers_to_json(families, params);
  }
  const std::string p = (dir / "covers.json").string();
  rec.artifacts.emplace_back(p, file_digest(p));
  rec.wall_seconds = timer.seconds();
  state.families = std::move(families);
  return rec;
}

StageRecord stage_dimension(const PipelineConfig& cfg, PipelineState& state) {
  StageTimer timer;
  StageRecord rec{"dimension", {}, 0};
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  if (state.families.empty()) {
    std::ifstream is(dir / "covers.json");
    if (!is)
      throw std::runtime_error("dimension stage: no cover families (run the cover stage first)");
    std::stringstream ss;
    ss << is.rdbuf();
    state.families = covers_from_json(ss.str()).first;
  }
  const std::string key = "C_" + std::to_string(cfg.cover_j);
  auto it = state.families.find(key);
  if (it == state.families.end())
    throw std::runtime_error("dimension stage: missing family " + key);

  std::vector<Box> boxes;
  for (const auto& q : it->second.cubes) boxes.push_back(box_of(q));
  std::vector<std::pair<Real, long>> counts;
  for (Real r : {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64})
    counts.emplace_back(r, boxes.empty() ? 1 : box_count(boxes, r, cfg.solver.period));
  DimensionEstimate est = estimate_dimension(counts, cfg.solver.alpha);

  {
    std::ofstream os(dir / "dimension.csv");
    write_dimension_csv(os, est, key);
  }
  {
    std::ofstream os(dir / "dimension.json");
    os << dimension_to_json(est, key, cfg.window_lo,
                            cfg.window_hi < 0 ? cfg.solver.t_end : cfg.window_hi);
  }
  for (const char* name : {"dimension.csv", "dimension.json"}) {
    const std::string p = (dir / name).string();
    rec.artifacts.emplace_back(p, file_digest(p));
  }
  rec.wall_seconds = timer.seconds();
  return rec;
}

}  // namespace

RunManifest run_pipeline(const PipelineConfig& cfg) {
  cfg.solver.validate();
  RunManifest manifest;
  manifest.seed = cfg.solver.seed;
  {
    // digest of the canonical config serialization
    json j;
    j["alpha"] = cfg.solver.alpha;
    j["epsilon"] = cfg.epsilon;
    j["n"] = cfg.solver.n;
    j["dt"] = cfg.solver.dt;
    j["t_end"] = cfg.solver.t_end;
    j["seed"] = cfg.solver.seed;
    j["stages"] = cfg.stages;
    manifest.config_digest = fnv1a_digest(j.dump());
  }

  PipelineState state;
  for (const auto& stage : cfg.stages) {
    try {
      if (stage == "solve")
        manifest.stages.push_back(stage_solve(cfg, state));
      else if (stage == "analyze")
        manifest.stages.push_back(stage_analyze(cfg, state));
      else if (stage == "cover")
        manifest.stages.push_back(stage_cover(cfg, state));
      else if (stage == "dimension")
        manifest.stages.push_back(stage_dimension(cfg, state));
      else
        throw std::runtime_error("unknown stage " + stage);
    } catch (const std::exception& e) {
      throw std::runtime_error("stage '" + stage + "' failed: " + e.what());
    }
  }

  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "config.json");
    os << config_to_json(cfg);
  }
  std::ofstream os(dir / "manifest.json");
  os << manifest_to_json(manifest);
  return manifest;
}

RunManifest run_pipeline_file(const std::string& config_path) {
  return run_pipeline(load_config(config_path));
}

}  // namespace pkrg
