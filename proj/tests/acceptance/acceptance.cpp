// Runs every acceptance criterion at its stated tolerance and runtime limit,
// printing one PASS/FAIL line each. Exit status is nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include "debranges/selftest.hpp"

namespace {

// Wall-clock limits in seconds; criterion 4 is bounded per subspace.
std::optional<double> runtime_limit(const debranges::CriterionResult& result) {
  switch (result.id) {
    case 1: return 5.0;
    case 2: return 10.0;
    case 4: return 10.0 * static_cast<double>(std::max<std::size_t>(1, result.details.value("subspaces", nlohmann::json::array()).size()));
    case 5: return 60.0;
    default: return std::nullopt;
  }
}

}  // namespace

int main() {
  const debranges::SelftestOptions options;
  int failures = 0;
  for (int id = 1; id <= debranges::kCriterionCount; ++id) {
    const auto start = std::chrono::steady_clock::now();
    debranges::CriterionResult result;
    std::string note;
    try {
      result = debranges::run_criterion(id, options);
    } catch (const std::exception& e) {
      result.id = id;
      note = std::string(" exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool passed = result.passed;
    if (const auto limit = runtime_limit(result); limit && seconds > *limit) {
      passed = false;
      note += " runtime limit of " + std::to_string(*limit) + " s exceeded";
    }
    if (!passed) ++failures;
    std::printf("%s criterion %d: %s [%.2f s]%s\n", passed ? "PASS" : "FAIL", id,
                debranges::criterion_name(id).c_str(), seconds, note.c_str());
    if (!passed && !result.details.is_null()) std::printf("  %s\n", result.details.dump().c_str());
  }
  std::printf("%d of %d criteria passed\n", debranges::kCriterionCount - failures, debranges::kCriterionCount);
  return failures == 0 ? 0 : 1;
}
