#include "debranges/paley_wiener.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace debranges {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex times_i(Complex z) { return {-z.imag(), z.real()}; }

double relative_loss(const Kernel& from, const SubspaceModel& onto, std::span<const Complex> probes) {
  double worst = 0.0;
  for (Complex lambda : probes) {
    const auto d = from.section_density(lambda);
    if (!d) throw UnsupportedRepresentation("ordering_check needs spectral densities");
    const double total = spectral_norm(*d);
    if (total == 0.0) continue;
    worst = std::max(worst, spectral_norm(*d - project_density(onto, *d)) / total);
  }
  return worst;
}

}  // namespace

DeBrangesSpace pw_space(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("pw_space: a must be positive and finite");
  return DeBrangesSpace(EntireModel::exponential(-a), "PW_" + std::to_string(a));
}

BandKernel::BandKernel(double lo, double hi, AmbientPtr ambient) : lo_(lo), hi_(hi), ambient_(std::move(ambient)) {
  if (!std::isfinite(lo_) || !std::isfinite(hi_) || !(lo_ < hi_)) throw DomainError("band kernel needs lo < hi");
}

Complex BandKernel::operator()(Complex lambda, Complex z) const {
  const Complex w = z - std::conj(lambda);
  return std::exp(times_i(midpoint() * w)) * sinc_kernel(half_length(), w);
}

LogValue BandKernel::log_value(Complex lambda, Complex z) const {
  const Complex w = z - std::conj(lambda);
  return LogValue::from_exponent(times_i(midpoint() * w)) * log_sinc_kernel(half_length(), w);
}

KernelPtr BandKernel::reflected() const { return std::make_shared<const BandKernel>(-hi_, -lo_, ambient_); }

std::optional<SpectralDensity> BandKernel::section_density(Complex lambda) const {
  return SpectralDensity::exponential(lo_, hi_, 1.0 / kTwoPi, -times_i(std::conj(lambda)));
}

std::optional<SpectralDensity> BandKernel::project(const SpectralDensity& f) const { return f.restricted(lo_, hi_); }

nlohmann::json BandKernel::to_json() const {
  nlohmann::json j{{"kind", "band"}, {"c", lo_}, {"d", hi_}};
  if (ambient_) j["ambient"] = ambient_->to_json();
  return j;
}

void BandSubspaceSpec::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("band subspace: a must be positive");
  if (!std::isfinite(c) || !std::isfinite(d) || !(c < d)) throw DomainError("band subspace: need c < d");
  if (c < -a || d > a) throw DomainError("band subspace: interval must lie inside [-a, a]");
}

std::vector<Complex> band_nodes(double half_length, int count) {
  if (count < 0) throw DomainError("band_nodes: negative count");
  if (!(half_length > 0.0)) throw DomainError("band_nodes: half-length must be positive");
  const double spacing = 0.5 / half_length;
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) out.emplace_back((j - count / 2 + 0.5) * spacing, 0.0);
  return out;
}

namespace {

std::vector<EntireModel> band_sections(const std::shared_ptr<const BandKernel>& kernel, int count) {
  std::vector<EntireModel> spans;
  for (Complex node : band_nodes(kernel->half_length(), count)) spans.push_back(EntireModel::kernel_section(kernel, node));
  return spans;
}

}  // namespace

SubspaceModel band_subspace(const BandSubspaceSpec& spec, int span_count) {
  spec.validate();
  DeBrangesSpace ambient = pw_space(spec.a);
  auto kernel = std::make_shared<const BandKernel>(spec.c, spec.d, ambient.kernel_ptr());
  auto spans = band_sections(kernel, span_count);
  return SubspaceModel::from_kernel(std::move(ambient), std::move(kernel), std::move(spans));
}

SubspaceModel band_approximation(const BandSubspaceSpec& spec, int rank) {
  spec.validate();
  if (rank < 1) throw DomainError("band_approximation: rank must be positive");
  DeBrangesSpace ambient = pw_space(spec.a);
  auto kernel = std::make_shared<const BandKernel>(spec.c, spec.d, ambient.kernel_ptr());
  return SubspaceModel::from_spans(std::move(ambient), band_sections(kernel, rank));
}

SubspaceModel shifted_subspace(const SubspaceModel& base, double beta, const DeBrangesSpace& ambient) {
  std::vector<EntireModel> spans;
  for (const auto& s : base.spans()) spans.push_back(EntireModel::product({EntireModel::exponential(beta), s}));
  if (!base.has_override()) return SubspaceModel::from_spans(ambient, std::move(spans));
  auto kernel = std::make_shared<const ShiftedKernel>(base.kernel(), beta, ambient.kernel_ptr());
  return SubspaceModel::from_kernel(ambient, std::move(kernel), std::move(spans));
}

RecoveredInterval recover_interval(const StructureResult& verified, double a) {
  if (!verified.report.passed()) {
    ExtractionInconsistentError e("recover_interval: structure verification failed");
    e.set_stage("verify_structure");
    throw e;
  }
  RecoveredInterval out;
  out.alpha = verified.decomposition.alpha;
  out.shift = out.alpha / 2.0;
  out.midpoint = -out.shift;
  try {
    out.half_length = exponential_type(verified.decomposition.e0);
  } catch (Error& e) {
    if (e.stage().empty()) e.set_stage("exponential_type");
    throw;
  }
  out.lo = out.midpoint - out.half_length;
  out.hi = out.midpoint + out.half_length;
  out.intermediate_type_bound = a + std::abs(out.shift);
  out.structure = verified.report;
  if (out.half_length > a + 1e-6 || out.lo < -a - 1e-6 || out.hi > a + 1e-6) {
    ExtractionInconsistentError e("recover_interval: recovered type " + std::to_string(out.half_length) +
                                  " is inconsistent with PW_" + std::to_string(a));
    e.set_stage("recover_interval");
    throw e;
  }
  return out;
}

RecoveredInterval recover_interval(const SubspaceModel& sub, double a, const StructureOptions& options) {
  return recover_interval(verify_structure(sub, options), a);
}

std::vector<Complex> ordering_probe_nodes(double a) {
  if (!(a > 0.0)) throw DomainError("ordering probes need a > 0");
  std::vector<Complex> out;
  for (double y : {0.25, -0.25})
    for (int k = 0; k < 8; ++k) out.emplace_back((k - 3.5) * 0.75 / a, y / a);
  return out;
}

OrderingVerdict ordering_check(const SubspaceModel& inner, const SubspaceModel& outer, std::span<const Complex> probes,
                               double tolerance) {
  OrderingVerdict v;
  v.inner_in_outer_residual = relative_loss(*inner.kernel(), outer, probes);
  v.outer_in_inner_residual = relative_loss(*outer.kernel(), inner, probes);
  if (v.inner_in_outer_residual <= tolerance)
    v.verdict = Containment::inner_in_outer;
  else if (v.outer_in_inner_residual <= tolerance)
    v.verdict = Containment::outer_in_inner;
  return v;
}

const char* to_string(Containment c) {
  switch (c) {
    case Containment::inner_in_outer: return "inner_in_outer";
    case Containment::outer_in_inner: return "outer_in_inner";
    case Containment::incomparable: return "incomparable";
  }
  return "incomparable";
}

nlohmann::json to_json(const BandSubspaceSpec& spec) { return {{"a", spec.a}, {"c", spec.c}, {"d", spec.d}}; }

nlohmann::json to_json(const RecoveredInterval& r) {
  return {{"midpoint", r.midpoint},
          {"half_length", r.half_length},
          {"shift", r.shift},
          {"alpha", r.alpha},
          {"interval", {r.lo, r.hi}},
          {"intermediate_type_bound", r.intermediate_type_bound}};
}

nlohmann::json to_json(const OrderingVerdict& v) {
  return {{"verdict", to_string(v.verdict)},
          {"inner_in_outer_residual", v.inner_in_outer_residual},
          {"outer_in_inner_residual", v.outer_in_inner_residual}};
}

}  // namespace debranges
