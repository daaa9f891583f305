#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "debranges/subspace.hpp"

namespace debranges {

/// f(z) / (z - mu) as a model, after checking that f(mu) vanishes relative to
/// the size of f on the unit circle around mu. Throws NotAZeroError.
EntireModel divide_zero(const EntireModel& f, Complex mu);

/// Relative distance to N of g = f / (z - mu), where f is the member of N
/// that vanishes at mu built from the kernel sections at a probe point and at
/// mu. The result lies in [0, 1]. Needs a Paley-Wiener ambient.
double near_invariance_residual(const SubspaceModel& sub, Complex mu);

/// Points where k_N(lambda, lambda) <= 1e-12 k_E(lambda, lambda).
std::vector<Complex> common_zero_scan(const SubspaceModel& sub, std::span<const Complex> grid);

struct NearInvarianceReport {
  std::vector<Complex> nodes;
  std::vector<double> residuals;
  double max_residual = 0.0;
  std::vector<Complex> common_zeros;
};

NearInvarianceReport near_invariance_report(const SubspaceModel& sub, std::span<const Complex> nodes,
                                            std::span<const Complex> scan_grid);

nlohmann::json to_json(const NearInvarianceReport& report, double tolerance);

}  // namespace debranges
