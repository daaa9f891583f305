#pragma once

// Batch front end: JSON run configurations, the verify / sweep / kernel
// pipelines and their reports.
//
// Config (version 1, unknown fields rejected):
//   {
//     "version": 1,
//     "ambient":  {"type": "paley_wiener", "a": 4}
//               | {"type": "exponential", "rate": -2}
//               | {"type": "polynomial", "coefficients": [[re, im], ...]},
//     "subspace": {"type": "full"}
//               | {"type": "band", "interval": [c, d], "spans": 16}
//               | {"type": "kernel_nodes", "nodes": [[re, im], ...], "interval": [c, d]}
//               | {"type": "shifted", "shift": beta, "interval": [c, d]}
//               | {"type": "zero_pinned", "node": [re, im]},
//     "grids": {"real":  {"start": x0, "stop": x1, "count": n},
//               "lower": {"start": [re, im], "stop": [re, im], "count": n},
//               "upper": {...}},
//     "tolerances": {"identity", "margin", "unimodularity", "exponent_fit",
//                    "roundtrip", "isometry", "near_invariance", "interval"},
//     "exponent_bound": A,
//     "seed": 0,
//     "kernel_points": [{"lambda": [re, im], "z": [re, im]}, ...],
//     "output": "report.json"
//   }
//
// A sweep file is {"version": 1, "runs": [config, ...]}.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "debranges/paley_wiener.hpp"

namespace debranges {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 2;
inline constexpr int kExitPrecondition = 3;
inline constexpr int kExitConfig = 4;

struct AmbientSpec {
  enum class Kind { paley_wiener, exponential, polynomial };
  Kind kind = Kind::paley_wiener;
  double a = 1.0;
  double rate = -1.0;
  std::vector<Complex> coefficients;
};

struct SubspaceSpec {
  enum class Kind { full, band, kernel_nodes, shifted, zero_pinned };
  Kind kind = Kind::full;
  std::optional<std::pair<double, double>> interval;
  std::vector<Complex> nodes;
  double shift = 0.0;
  Complex node{};
  int spans = 16;
};

struct GridSpec {
  Complex start{};
  Complex stop{};
  int count = 0;
};

struct RunTolerances {
  Tolerances structure;
  double near_invariance = 1e-6;
  double interval = 1e-6;

  RunTolerances scaled(double factor) const;
};

struct RunConfig {
  AmbientSpec ambient;
  SubspaceSpec subspace;
  std::optional<GridSpec> real_grid;
  std::optional<GridSpec> lower_grid;
  std::optional<GridSpec> upper_grid;
  RunTolerances tolerances;
  std::optional<double> exponent_bound;
  std::uint64_t seed = 0;
  std::vector<std::pair<Complex, Complex>> kernel_points;
  std::optional<std::string> output;
  nlohmann::json source;  // the parsed document, echoed into reports
};

/// Throws ConfigError on any schema violation.
RunConfig parse_config(const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);
RunConfig load_config(const std::filesystem::path& path);
std::vector<RunConfig> parse_sweep(const nlohmann::json& j);

DeBrangesSpace build_ambient(const AmbientSpec& spec);
SubspaceModel build_subspace(const RunConfig& config);
/// Exact interval of a band-type subspace in a Paley-Wiener ambient.
std::optional<std::pair<double, double>> expected_interval(const RunConfig& config);

struct RunOutcome {
  nlohmann::json report;
  int exit_code = kExitPass;
};

RunOutcome run_verify(const RunConfig& config, double tol_scale = 1.0);

struct SweepOutcome {
  std::string csv;
  int exit_code = kExitPass;
};

inline constexpr const char* kSweepHeader = "a,c_in,d_in,alpha,c0,c_out,d_out,max_residual,wall_time_s,status";

SweepOutcome run_sweep(std::span<const RunConfig> configs, double tol_scale = 1.0);

/// k_E and k_N at the configured (lambda, z) pairs.
RunOutcome run_kernel(const RunConfig& config);

/// Exit status for an escaped exception.
int exit_code_for(const std::exception& e);
nlohmann::json error_to_json(const std::exception& e);

/// Writes through a temporary file in the same directory and renames it,
/// creating missing parent directories.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace debranges
