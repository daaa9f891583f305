#pragma once

// Paley-Wiener spaces PW_a (E(z) = e^{-iaz}) and their band subspaces
// {f : supp of the spectral density inside [c, d]}.

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "debranges/structure.hpp"

namespace debranges {

/// Throws DomainError unless a > 0.
DeBrangesSpace pw_space(double a);

/// (e^{idw} - e^{icw}) / (2 pi i w), w = z - conj lambda, computed as
/// e^{imw} sin(hw) / (pi w) with m the band midpoint and h its half-length.
class BandKernel final : public Kernel {
 public:
  BandKernel(double lo, double hi, AmbientPtr ambient = nullptr);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double midpoint() const noexcept { return 0.5 * (lo_ + hi_); }
  double half_length() const noexcept { return 0.5 * (hi_ - lo_); }

  Complex operator()(Complex lambda, Complex z) const override;
  LogValue log_value(Complex lambda, Complex z) const override;
  KernelPtr reflected() const override;
  std::optional<SpectralDensity> section_density(Complex lambda) const override;
  std::optional<SpectralDensity> project(const SpectralDensity& f) const override;
  const Kernel* ambient() const override { return ambient_.get(); }
  nlohmann::json to_json() const override;

 private:
  double lo_;
  double hi_;
  AmbientPtr ambient_;
};

struct BandSubspaceSpec {
  double a = 1.0;
  double c = -1.0;
  double d = 1.0;

  /// Throws DomainError unless c < d and [c, d] lies in [-a, a].
  void validate() const;
};

/// Real nodes (k + 1/2) / (2h), k = -count/2 .. count/2 - 1, for a band of
/// half-length h. Families for increasing even counts are nested.
std::vector<Complex> band_nodes(double half_length, int count);

/// Band subspace with the exact band kernel as override and `span_count`
/// kernel sections as spanning data.
SubspaceModel band_subspace(const BandSubspaceSpec& spec, int span_count = 16);

/// The same band represented only through `rank` kernel sections.
SubspaceModel band_approximation(const BandSubspaceSpec& spec, int rank);

/// e^{i beta z} N inside `ambient`. Spanning data are multiplied by
/// e^{i beta z}; an exact kernel is shifted along.
SubspaceModel shifted_subspace(const SubspaceModel& base, double beta, const DeBrangesSpace& ambient);

struct RecoveredInterval {
  double midpoint = 0.0;
  double half_length = 0.0;
  double shift = 0.0;  // b = -midpoint
  double alpha = 0.0;  // 2b
  double lo = 0.0;
  double hi = 0.0;
  double intermediate_type_bound = 0.0;  // a + |b|
  StructureReport structure;
};

/// Runs verify_structure and reads the interval off (alpha, type of E0).
RecoveredInterval recover_interval(const SubspaceModel& sub, double a, const StructureOptions& options = {});
/// Same, from an already verified pipeline result.
RecoveredInterval recover_interval(const StructureResult& verified, double a);

enum class Containment { inner_in_outer, outer_in_inner, incomparable };

struct OrderingVerdict {
  Containment verdict = Containment::incomparable;
  double inner_in_outer_residual = 0.0;
  double outer_in_inner_residual = 0.0;
};

/// 16 probe nodes, 8 real offsets at two heights, scaled to PW_a.
std::vector<Complex> ordering_probe_nodes(double a);

/// Projects the kernel sections of each subspace at the probe nodes onto the
/// other; containment holds when the relative loss is at most `tolerance`.
OrderingVerdict ordering_check(const SubspaceModel& inner, const SubspaceModel& outer, std::span<const Complex> probes,
                               double tolerance = 1e-6);

const char* to_string(Containment c);

nlohmann::json to_json(const BandSubspaceSpec& spec);
nlohmann::json to_json(const RecoveredInterval& interval);
nlohmann::json to_json(const OrderingVerdict& verdict);

}  // namespace debranges
