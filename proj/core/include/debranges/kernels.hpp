#pragma once

// Reproducing kernels of subspaces of a de Branges space.

#include <memory>
#include <vector>

#include "debranges/space.hpp"

namespace debranges {

using AmbientPtr = std::shared_ptr<const DeBrangesKernel>;

/// Kernel of span{s_j} inside H(E): the orthogonal projection of k_E(lambda, .)
/// onto the span, k(lambda, z) = sum_j c_j(lambda) s_j(z) with
/// c(lambda) = conj(G^+ v(lambda)), v_j = s_j(lambda), G the Gram matrix.
class ProjectedKernel final : public Kernel {
 public:
  ProjectedKernel(AmbientPtr ambient, std::vector<EntireModel> spans,
                  double rank_tolerance = kDefaultRankTolerance);

  const AmbientPtr& ambient_kernel() const noexcept { return ambient_; }
  const std::vector<EntireModel>& spans() const noexcept { return spans_; }
  const Eigen::MatrixXcd& gram() const noexcept { return gram_; }
  const PseudoInverse& pseudo_inverse() const noexcept { return pinv_; }
  double rank_tolerance() const noexcept { return rank_tolerance_; }
  int rank() const noexcept { return pinv_.rank; }

  /// Coefficients of k(lambda, .) over the spanning functions.
  Eigen::VectorXcd coefficients(Complex lambda) const;
  /// Coefficients of the orthogonal projection of f onto the span.
  Eigen::VectorXcd projection_coefficients(const EntireModel& f) const;

  Complex operator()(Complex lambda, Complex z) const override;
  LogValue log_value(Complex lambda, Complex z) const override;
  KernelPtr reflected() const override;
  std::optional<SpectralDensity> section_density(Complex lambda) const override;
  std::optional<SpectralDensity> project(const SpectralDensity& f) const override;
  const Kernel* ambient() const override { return ambient_.get(); }
  nlohmann::json to_json() const override;

 private:
  Eigen::VectorXcd coefficients_from_inner(const Eigen::VectorXcd& inner_with_spans) const;

  AmbientPtr ambient_;
  std::vector<EntireModel> spans_;
  double rank_tolerance_;
  Eigen::MatrixXcd gram_;
  PseudoInverse pinv_;
  std::vector<std::optional<SpectralDensity>> densities_;
};

/// Kernel of {f in N : f(p) = 0} for a base kernel K of N:
/// K(lambda, z) - K(p, z) K(lambda, p) / K(p, p).
class PinnedKernel final : public Kernel {
 public:
  PinnedKernel(KernelPtr base, Complex node);

  Complex operator()(Complex lambda, Complex z) const override;
  KernelPtr reflected() const override;
  std::optional<SpectralDensity> section_density(Complex lambda) const override;
  std::optional<SpectralDensity> project(const SpectralDensity& f) const override;
  const Kernel* ambient() const override { return base_->ambient(); }
  nlohmann::json to_json() const override;

 private:
  KernelPtr base_;
  Complex node_;
};

/// Kernel of e^{i beta z} N: e^{i beta (z - conj lambda)} K(lambda, z).
/// `ambient` names the de Branges space the shifted subspace lives in.
class ShiftedKernel final : public Kernel {
 public:
  ShiftedKernel(KernelPtr base, double shift, AmbientPtr ambient = nullptr);

  double shift() const noexcept { return shift_; }
  const KernelPtr& base() const noexcept { return base_; }

  Complex operator()(Complex lambda, Complex z) const override;
  LogValue log_value(Complex lambda, Complex z) const override;
  KernelPtr reflected() const override;
  std::optional<SpectralDensity> section_density(Complex lambda) const override;
  std::optional<SpectralDensity> project(const SpectralDensity& f) const override;
  const Kernel* ambient() const override { return ambient_.get(); }
  nlohmann::json to_json() const override;

 private:
  KernelPtr base_;
  double shift_;
  AmbientPtr ambient_;
};

}  // namespace debranges
