#pragma once

// The acceptance checks, shared by the `selftest` verb and the acceptance
// test binary. Reports contain no timings so that they are byte-stable.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace debranges {

struct SelftestOptions {
  std::uint64_t seed = 0;
  double tol_scale = 1.0;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  nlohmann::json details;
};

inline constexpr int kCriterionCount = 8;

/// Runs one criterion, 1-based. Library errors are caught and reported as a
/// failure with the error in `details`.
CriterionResult run_criterion(int id, const SelftestOptions& options);

const std::string& criterion_name(int id);

/// All criteria in order as {"schema", "seed", "tol_scale", "criteria", "passed"}.
nlohmann::json selftest_report(const SelftestOptions& options);

}  // namespace debranges
