#pragma once

// Extraction of (F, G, U, alpha, E0) from a subspace kernel and verification
// that N = e^{i alpha z} H(E0).

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "debranges/subspace.hpp"

namespace debranges {

inline constexpr Complex kAnchor{0.0, -0.5};

struct FGPair {
  EntireModel f;
  EntireModel g;
  double diagonal_at_anchor = 0.0;            // k_N(anchor, anchor)
  double diagonal_at_conjugate_anchor = 0.0;  // k_N(conj anchor, conj anchor)
};

/// F = k_N(a, a)^{-1/2} k_N(a, z) (z - conj a), G likewise at conj a, with
/// a = kAnchor. Throws CommonZeroError if either diagonal vanishes.
FGPair extract_fg(const SubspaceModel& sub, Complex anchor = kAnchor);

struct FGResiduals {
  double identity = 0.0;       // max |F*F - G*G| / (1 + |F*F| + |G*G|)
  double real_equality = 0.0;  // max | |F(x)| - |G(x)| | / (1 + |F(x)|)
  double margin_lower = 0.0;   // min |F| - |G| on the lower grid
  double margin_upper = 0.0;   // min |G| - |F| on the upper grid
};

/// `extra` points only enter the identity residual.
FGResiduals verify_fg_identities(const EntireModel& f, const EntireModel& g, std::span<const double> real_grid,
                                 std::span<const Complex> lower_grid, std::span<const Complex> upper_grid,
                                 std::span<const Complex> extra = {});

/// G*(z) / F(z); PoleIndicatorError where F vanishes.
Complex compute_u(const EntireModel& f, const EntireModel& g, Complex z);

using USample = std::pair<double, Complex>;

struct ExponentFit {
  double alpha = 0.0;
  double residual = 0.0;        // max |U(x) - e^{i alpha x}|
  double offset = 0.0;          // constant phase of the fit, in (-pi, pi]
  double unimodularity = 0.0;   // max ||U(x)| - 1|
};

/// Least-squares slope of the unwrapped phase. Samples must lie on a uniform
/// grid; with a prior bound on |alpha| the spacing must not exceed
/// pi / (2 bound).
ExponentFit fit_exponent(std::span<const USample> samples, std::optional<double> bound = std::nullopt);

/// sqrt(2 pi) G e^{i alpha z / 2}; ExtractionInconsistentError unless the
/// result is Hermite-Biehler on the standard grid.
EntireModel assemble_e0(const EntireModel& f, const EntireModel& g, double alpha);

/// lim log|f(iy)| / y taken along both imaginary half-axes.
double exponential_type(const EntireModel& f);

struct Tolerances {
  double identity = 1e-8;
  double margin = 1e-12;
  double unimodularity = 1e-8;
  double exponent_fit = 1e-8;
  double roundtrip = 1e-8;
  double isometry = 1e-8;

  Tolerances scaled(double factor) const;
};

struct StructureOptions {
  double exponent_bound = 0.0;  // prior bound on |alpha|; 0 picks 2a for Paley-Wiener ambients
  Tolerances tolerances;
  std::uint64_t seed = 0;
  int identity_points = 200;
  int half_plane_points = 50;
  int roundtrip_points = 10;
  int isometry_members = 10;
  std::optional<std::vector<double>> real_grid;
  std::optional<std::vector<Complex>> lower_grid;
  std::optional<std::vector<Complex>> upper_grid;
};

struct KernelDecomposition {
  EntireModel f;
  EntireModel g;
  Complex anchor = kAnchor;
  std::vector<USample> u_samples;
  double alpha = 0.0;
  double fit_residual = 0.0;
  EntireModel e0;
  double normalization = 0.0;
};

struct StructureReport {
  double alpha = 0.0;
  double phase_offset = 0.0;
  FGResiduals fg;
  double unimodularity = 0.0;
  double exponent_fit = 0.0;
  double kernel_roundtrip = 0.0;
  double isometry = 0.0;
  std::optional<double> type_e0;
  std::optional<double> type_ambient;
  std::map<std::string, bool> verdicts;
  nlohmann::json e0;

  bool passed() const;
};

struct StructureResult {
  KernelDecomposition decomposition;
  StructureReport report;
};

/// Full pipeline. Errors escape with the failing stage recorded.
StructureResult verify_structure(const SubspaceModel& sub, const StructureOptions& options = {});

nlohmann::json to_json(const StructureReport& report);

}  // namespace debranges
