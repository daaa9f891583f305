#include "debranges/subspace.hpp"

namespace debranges {

SubspaceModel::SubspaceModel(DeBrangesSpace ambient, KernelPtr exact, std::vector<EntireModel> spans,
                             double rank_tolerance)
    : ambient_(std::move(ambient)), override_(std::move(exact)) {
  if (!spans.empty() || !override_) {
    projected_ = std::make_shared<const ProjectedKernel>(ambient_.kernel_ptr(), std::move(spans), rank_tolerance);
    const auto& ev = projected_->pseudo_inverse().eigenvalues;
    if (ev.size() > 0) {
      const double trace = projected_->gram().trace().real();
      if (ev.minCoeff() < -1e-10 * trace)
        throw DomainError("Gram matrix is not positive semidefinite (min eigenvalue " +
                          std::to_string(ev.minCoeff()) + ")");
    }
  }
  kernel_ = override_ ? override_ : KernelPtr(projected_);
}

SubspaceModel SubspaceModel::from_spans(DeBrangesSpace ambient, std::vector<EntireModel> spans,
                                        double rank_tolerance) {
  return SubspaceModel(std::move(ambient), nullptr, std::move(spans), rank_tolerance);
}

SubspaceModel SubspaceModel::from_kernel(DeBrangesSpace ambient, KernelPtr exact, std::vector<EntireModel> spans,
                                         double rank_tolerance) {
  if (!exact) throw DomainError("subspace override kernel must not be null");
  return SubspaceModel(std::move(ambient), std::move(exact), std::move(spans), rank_tolerance);
}

const std::vector<EntireModel>& SubspaceModel::spans() const {
  static const std::vector<EntireModel> none;
  return projected_ ? projected_->spans() : none;
}

const Eigen::MatrixXcd& SubspaceModel::gram() const {
  static const Eigen::MatrixXcd none;
  return projected_ ? projected_->gram() : none;
}

const PseudoInverse& SubspaceModel::pseudo_inverse() const {
  static const PseudoInverse none;
  return projected_ ? projected_->pseudo_inverse() : none;
}

Eigen::VectorXcd project_kernel(const SubspaceModel& sub, Complex lambda) {
  if (!sub.projected() || sub.rank() == 0) throw EmptySubspaceError("project_kernel: subspace span has rank 0");
  return sub.projected()->coefficients(lambda);
}

SubspaceKernelValue subspace_kernel_detail(const SubspaceModel& sub, Complex lambda, Complex z) {
  SubspaceKernelValue out;
  if (sub.has_override()) {
    out.value = (*sub.kernel())(lambda, z);
    if (sub.projected() && sub.rank() > 0) out.projected = (*sub.projected())(lambda, z);
    return out;
  }
  if (sub.rank() == 0) throw EmptySubspaceError("subspace_kernel: subspace has rank 0");
  out.value = (*sub.kernel())(lambda, z);
  return out;
}

Complex subspace_kernel(const SubspaceModel& sub, Complex lambda, Complex z) {
  return subspace_kernel_detail(sub, lambda, z).value;
}

SpectralDensity project_density(const SubspaceModel& sub, const SpectralDensity& f) {
  auto p = sub.kernel()->project(f);
  if (!p) throw UnsupportedRepresentation("subspace projection needs spectral densities (Paley-Wiener ambient)");
  return *p;
}

}  // namespace debranges
