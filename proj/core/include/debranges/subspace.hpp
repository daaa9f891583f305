#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "debranges/kernels.hpp"

namespace debranges {

/// A closed subspace N of H(E): spanning functions with their Gram matrix and
/// pseudo-inverse, and optionally an exact kernel that overrides the
/// projected one.
class SubspaceModel {
 public:
  /// N = closed span of `spans`, kernel obtained by projection.
  static SubspaceModel from_spans(DeBrangesSpace ambient, std::vector<EntireModel> spans,
                                  double rank_tolerance = kDefaultRankTolerance);
  /// N given by its exact reproducing kernel; `spans` (possibly empty) supply a
  /// projection-based cross-check.
  static SubspaceModel from_kernel(DeBrangesSpace ambient, KernelPtr exact, std::vector<EntireModel> spans = {},
                                   double rank_tolerance = kDefaultRankTolerance);

  const DeBrangesSpace& ambient() const noexcept { return ambient_; }
  const std::vector<EntireModel>& spans() const;
  const Eigen::MatrixXcd& gram() const;
  const PseudoInverse& pseudo_inverse() const;
  /// Rank of the spanning family (0 when there are no spans).
  int rank() const noexcept { return projected_ ? projected_->rank() : 0; }

  bool has_override() const noexcept { return override_ != nullptr; }
  /// The exact kernel when present, else the projected one.
  const KernelPtr& kernel() const noexcept { return kernel_; }
  const std::shared_ptr<const ProjectedKernel>& projected() const noexcept { return projected_; }

  EntireModel section(Complex lambda) const { return EntireModel::kernel_section(kernel_, lambda); }

 private:
  SubspaceModel(DeBrangesSpace ambient, KernelPtr exact, std::vector<EntireModel> spans, double rank_tolerance);

  DeBrangesSpace ambient_;
  KernelPtr override_;
  std::shared_ptr<const ProjectedKernel> projected_;
  KernelPtr kernel_;
};

/// Coefficients c with k_N(lambda, .) = sum_j c_j s_j, the projection of
/// k_E(lambda, .) onto the span. Throws EmptySubspaceError for rank 0.
Eigen::VectorXcd project_kernel(const SubspaceModel& sub, Complex lambda);

struct SubspaceKernelValue {
  Complex value{};
  std::optional<Complex> projected;  // span-based value when an override is in use
};

SubspaceKernelValue subspace_kernel_detail(const SubspaceModel& sub, Complex lambda, Complex z);
Complex subspace_kernel(const SubspaceModel& sub, Complex lambda, Complex z);

/// Orthogonal projection onto N of a function given by its spectral density.
SpectralDensity project_density(const SubspaceModel& sub, const SpectralDensity& f);

}  // namespace debranges
