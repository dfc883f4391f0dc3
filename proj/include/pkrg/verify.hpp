#pragma once

#include <string>
#include <vector>

#include "pkrg/types.hpp"

namespace pkrg {

struct VerifyResult {
  std::string suite;
  bool passed = false;
  std::string details;
};

struct UnknownSuiteError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Known suites: paraproduct, leray, partition, bump, geometry, cover,
/// dimension, energy, all.
std::vector<std::string> verify_suites();

/// Runs one suite (or every suite for "all"). Throws UnknownSuiteError for an
/// unrecognized selector.
std::vector<VerifyResult> verify(const std::string& selector);

std::string verify_results_json(const std::vector<VerifyResult>& results);

}  // namespace pkrg
