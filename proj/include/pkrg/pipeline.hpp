#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pkrg/covering.hpp"
#include "pkrg/solver.hpp"

namespace pkrg {

inline constexpr const char* kToolVersion = "pkrg 0.1.0";

/// All config violations at once, each prefixed by its field path.
struct ConfigError : std::invalid_argument {
  explicit ConfigError(const std::vector<std::string>& problems);
  std::vector<std::string> problems;
};

/// Whole-pipeline configuration, read from a JSON file. Time quantities are
/// dimensionless simulation time; lengths are fractions of the period.
struct PipelineConfig {
  SolverConfig solver;
  Real epsilon = 0.01;
  std::vector<std::string> stages;  // subset of solve/analyze/cover/dimension, in order
  std::string out_dir = "run";
  int threads = 1;

  // analyze stage
  int analyze_cube_level = 2;
  std::vector<int> analyze_bands = {2, 3};

  // cover stage
  int cover_j = 3;
  Real cover_eta = std::exp2(-12);
  Real window_lo = 0, window_hi = -1;  // -1: t_end
  int cover_retries = 8;               // eta halvings on barrier failure

  CoverParams cover_params() const { return {solver.alpha, epsilon, cover_eta}; }
};

PipelineConfig parse_config(const std::string& json_text);
PipelineConfig load_config(const std::string& path);

/// Canonical serialization; parse_config(config_to_json(c)) reproduces c.
std::string config_to_json(const PipelineConfig& cfg);

/// Deterministic 64-bit FNV-1a content digest, hex-encoded.
std::string fnv1a_digest(const std::string& bytes);
std::string file_digest(const std::string& path);

struct StageRecord {
  std::string name;
  std::vector<std::pair<std::string, std::string>> artifacts;  // path, digest
  Real wall_seconds = 0;
};

struct RunManifest {
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  std::vector<StageRecord> stages;
};

std::string manifest_to_json(const RunManifest& m);

/// Executes the configured stages in order; throws on the first stage
/// failure with the stage name in the message. An empty stage list yields a
/// manifest with zero stages.
RunManifest run_pipeline(const PipelineConfig& cfg);
RunManifest run_pipeline_file(const std::string& config_path);

}  // namespace pkrg
