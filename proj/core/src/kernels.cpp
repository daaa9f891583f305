#include "debranges/kernels.hpp"

#include <cmath>

#include "debranges/json_io.hpp"

namespace debranges {

namespace {

Complex times_i(Complex z) { return {-z.imag(), z.real()}; }

}  // namespace

// ---------------------------------------------------------------------------
// ProjectedKernel

ProjectedKernel::ProjectedKernel(AmbientPtr ambient, std::vector<EntireModel> spans, double rank_tolerance)
    : ambient_(std::move(ambient)), spans_(std::move(spans)), rank_tolerance_(rank_tolerance) {
  if (!ambient_) throw DomainError("projected kernel needs an ambient space");
  gram_ = gram_matrix(*ambient_, spans_);
  pinv_ = debranges::pseudo_inverse(gram_, rank_tolerance_);
  if (ambient_->paley_wiener_type()) {
    densities_.reserve(spans_.size());
    for (const auto& s : spans_) densities_.push_back(spectral_density(s));
  }
}

Eigen::VectorXcd ProjectedKernel::coefficients_from_inner(const Eigen::VectorXcd& inner_with_spans) const {
  // sum_l d_l <s_l, s_j> = <f, s_j>  <=>  G conj(d) = conj(b).
  return (pinv_.matrix * inner_with_spans.conjugate()).conjugate();
}

Eigen::VectorXcd ProjectedKernel::coefficients(Complex lambda) const {
  if (pinv_.rank == 0) throw EmptySubspaceError("subspace has rank 0");
  Eigen::VectorXcd values(static_cast<Eigen::Index>(spans_.size()));
  for (std::size_t j = 0; j < spans_.size(); ++j) values(static_cast<Eigen::Index>(j)) = spans_[j](lambda);
  // <k_E(lambda, .), s_j> = conj(s_j(lambda)).
  return coefficients_from_inner(values.conjugate());
}

Eigen::VectorXcd ProjectedKernel::projection_coefficients(const EntireModel& f) const {
  if (pinv_.rank == 0) throw EmptySubspaceError("subspace has rank 0");
  Eigen::VectorXcd b(static_cast<Eigen::Index>(spans_.size()));
  for (std::size_t j = 0; j < spans_.size(); ++j)
    b(static_cast<Eigen::Index>(j)) = inner_product(*ambient_, f, spans_[j]);
  return coefficients_from_inner(b);
}

Complex ProjectedKernel::operator()(Complex lambda, Complex z) const {
  const Eigen::VectorXcd c = coefficients(lambda);
  Complex v{};
  for (std::size_t j = 0; j < spans_.size(); ++j) v += c(static_cast<Eigen::Index>(j)) * spans_[j](z);
  return v;
}

LogValue ProjectedKernel::log_value(Complex lambda, Complex z) const {
  const Eigen::VectorXcd c = coefficients(lambda);
  std::vector<Complex> w(spans_.size());
  std::vector<LogValue> parts(spans_.size());
  for (std::size_t j = 0; j < spans_.size(); ++j) {
    w[j] = c(static_cast<Eigen::Index>(j));
    parts[j] = spans_[j].log_value(z);
  }
  return log_sum(w, parts);
}

KernelPtr ProjectedKernel::reflected() const {
  std::vector<EntireModel> stars;
  stars.reserve(spans_.size());
  for (const auto& s : spans_) stars.push_back(s.star());
  return std::make_shared<const ProjectedKernel>(ambient_, std::move(stars), rank_tolerance_);
}

std::optional<SpectralDensity> ProjectedKernel::section_density(Complex lambda) const {
  if (densities_.empty() && !spans_.empty()) return std::nullopt;
  const Eigen::VectorXcd c = coefficients(lambda);
  SpectralDensity out;
  for (std::size_t j = 0; j < spans_.size(); ++j) {
    if (!densities_[j]) return std::nullopt;
    out += densities_[j]->scaled(c(static_cast<Eigen::Index>(j)));
  }
  return out;
}

std::optional<SpectralDensity> ProjectedKernel::project(const SpectralDensity& f) const {
  if (densities_.empty() && !spans_.empty()) return std::nullopt;
  if (pinv_.rank == 0) return SpectralDensity{};
  Eigen::VectorXcd b(static_cast<Eigen::Index>(spans_.size()));
  for (std::size_t j = 0; j < spans_.size(); ++j) {
    if (!densities_[j]) return std::nullopt;
    b(static_cast<Eigen::Index>(j)) = spectral_inner(f, *densities_[j]);
  }
  const Eigen::VectorXcd d = coefficients_from_inner(b);
  SpectralDensity out;
  for (std::size_t j = 0; j < spans_.size(); ++j) out += densities_[j]->scaled(d(static_cast<Eigen::Index>(j)));
  return out;
}

nlohmann::json ProjectedKernel::to_json() const {
  nlohmann::json spans = nlohmann::json::array();
  for (const auto& s : spans_) spans.push_back(model_to_json(s));
  return {{"kind", "projected"},
          {"ambient", ambient_->to_json()},
          {"spans", std::move(spans)},
          {"rank_tolerance", rank_tolerance_}};
}

// ---------------------------------------------------------------------------
// PinnedKernel

PinnedKernel::PinnedKernel(KernelPtr base, Complex node) : base_(std::move(base)), node_(node) {
  if (!base_) throw DomainError("pinned kernel needs a base kernel");
  if (!((*base_)(node_, node_).real() > 0.0))
    throw DomainError("pinned kernel: base kernel already vanishes at the pinned node");
}

Complex PinnedKernel::operator()(Complex lambda, Complex z) const {
  const Complex kpp = (*base_)(node_, node_);
  return (*base_)(lambda, z) - (*base_)(node_, z) * (*base_)(lambda, node_) / kpp;
}

KernelPtr PinnedKernel::reflected() const {
  return std::make_shared<const PinnedKernel>(base_->reflected(), std::conj(node_));
}

std::optional<SpectralDensity> PinnedKernel::section_density(Complex lambda) const {
  auto dl = base_->section_density(lambda);
  auto dp = base_->section_density(node_);
  if (!dl || !dp) return std::nullopt;
  const Complex factor = (*base_)(lambda, node_) / (*base_)(node_, node_);
  return *dl - dp->scaled(factor);
}

std::optional<SpectralDensity> PinnedKernel::project(const SpectralDensity& f) const {
  auto pf = base_->project(f);
  auto dp = base_->section_density(node_);
  if (!pf || !dp) return std::nullopt;
  const Complex factor = spectral_inner(*pf, *dp) / (*base_)(node_, node_);
  return *pf - dp->scaled(factor);
}

nlohmann::json PinnedKernel::to_json() const {
  return {{"kind", "pinned"}, {"base", base_->to_json()}, {"node", complex_to_json(node_)}};
}

// ---------------------------------------------------------------------------
// ShiftedKernel

ShiftedKernel::ShiftedKernel(KernelPtr base, double shift, AmbientPtr ambient)
    : base_(std::move(base)), shift_(shift), ambient_(std::move(ambient)) {
  if (!base_) throw DomainError("shifted kernel needs a base kernel");
  if (!std::isfinite(shift_)) throw DomainError("shift must be finite");
}

Complex ShiftedKernel::operator()(Complex lambda, Complex z) const {
  return std::exp(times_i(shift_ * (z - std::conj(lambda)))) * (*base_)(lambda, z);
}

LogValue ShiftedKernel::log_value(Complex lambda, Complex z) const {
  return LogValue::from_exponent(times_i(shift_ * (z - std::conj(lambda)))) * base_->log_value(lambda, z);
}

KernelPtr ShiftedKernel::reflected() const {
  return std::make_shared<const ShiftedKernel>(base_->reflected(), -shift_, ambient_);
}

std::optional<SpectralDensity> ShiftedKernel::section_density(Complex lambda) const {
  auto d = base_->section_density(lambda);
  if (!d) return std::nullopt;
  return d->shifted(shift_).scaled(std::exp(times_i(-shift_ * std::conj(lambda))));
}

std::optional<SpectralDensity> ShiftedKernel::project(const SpectralDensity& f) const {
  auto inner = base_->project(f.shifted(-shift_));
  if (!inner) return std::nullopt;
  return inner->shifted(shift_);
}

nlohmann::json ShiftedKernel::to_json() const {
  nlohmann::json j{{"kind", "shifted"}, {"base", base_->to_json()}, {"shift", shift_}};
  if (ambient_) j["ambient"] = ambient_->to_json();
  return j;
}

}  // namespace debranges
