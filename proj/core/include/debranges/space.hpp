#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "debranges/entire_model.hpp"

namespace debranges {

/// Reproducing kernel of H(E):
///
///     k_E(lambda, z) = (E(z) conj E(lambda) - E*(z) conj E*(lambda)) / (2 pi i (conj lambda - z)).
///
/// When E(z) = e^{-i tau z} (tau > 0, the Paley-Wiener space PW_tau) the closed
/// form sin(tau w) / (pi w), w = z - conj lambda, is used instead.
class DeBrangesKernel final : public Kernel {
 public:
  explicit DeBrangesKernel(EntireModel e);

  const EntireModel& e() const noexcept { return e_; }
  const EntireModel& e_star() const noexcept { return e_star_; }
  std::optional<double> paley_wiener_type() const noexcept { return tau_; }

  Complex operator()(Complex lambda, Complex z) const override;
  LogValue log_value(Complex lambda, Complex z) const override;
  KernelPtr reflected() const override { return shared_from_this(); }
  std::optional<SpectralDensity> section_density(Complex lambda) const override;
  std::optional<SpectralDensity> project(const SpectralDensity& f) const override;
  const Kernel* ambient() const override { return this; }
  nlohmann::json to_json() const override;

 private:
  EntireModel e_;
  EntireModel e_star_;
  std::optional<double> tau_;
};

/// sin(tau w) / (pi w) with its analytic value tau/pi at w = 0.
Complex sinc_kernel(double tau, Complex w);
LogValue log_sinc_kernel(double tau, Complex w);

/// A de Branges space H(E). Construction verifies the Hermite-Biehler
/// inequality on `validation_grid()` and throws DomainError otherwise.
class DeBrangesSpace {
 public:
  explicit DeBrangesSpace(EntireModel e, std::string label = {});

  /// Upper half-plane points used to validate de Branges functions.
  static std::vector<Complex> validation_grid();

  const EntireModel& e() const noexcept { return kernel_->e(); }
  const std::shared_ptr<const DeBrangesKernel>& kernel_ptr() const noexcept { return kernel_; }
  Complex kernel(Complex lambda, Complex z) const { return (*kernel_)(lambda, z); }
  EntireModel section(Complex lambda) const { return EntireModel::kernel_section(kernel_, lambda); }
  const std::string& label() const noexcept { return label_; }
  std::optional<double> paley_wiener_type() const noexcept { return kernel_->paley_wiener_type(); }
  bool is_paley_wiener() const noexcept { return paley_wiener_type().has_value(); }

 private:
  std::shared_ptr<const DeBrangesKernel> kernel_;
  std::string label_;
};

enum class InnerProductRoute {
  automatic,     // reproducing property first, spectral densities as fallback
  reproducing,   // reproducing-property rules only
  spectral,      // Paley-Wiener spectral densities only
};

/// <f, g> in H(E), computed exactly on the kernel-combination family:
///  - <f, k(mu, .)> = f(mu) for sections of the space's own kernel,
///  - <K(lambda, .), K(mu, .)> = K(lambda, mu) for a kernel reproducing a
///    subspace of H(E),
///  - Plancherel on spectral densities when H(E) is a Paley-Wiener space.
/// Anything else raises UnsupportedRepresentation.
Complex inner_product(const DeBrangesKernel& space, const EntireModel& f, const EntireModel& g,
                      InnerProductRoute route = InnerProductRoute::automatic);
Complex inner_product(const DeBrangesSpace& space, const EntireModel& f, const EntireModel& g,
                      InnerProductRoute route = InnerProductRoute::automatic);

double norm(const DeBrangesSpace& space, const EntireModel& f,
            InnerProductRoute route = InnerProductRoute::automatic);

struct QuadratureResult {
  Complex value{};
  double window = 0.0;
  double step = 0.0;
  std::size_t samples = 0;
};

/// Truncated trapezoid approximation of \int f(x) conj g(x) / |E(x)|^2 dx.
/// The window doubles from |x| = 64 until the last octave contributes less
/// than tol/2; the step halves until the in-window change is below tol/2.
/// More than 2^24 samples raises AccuracyError with the best estimate.
QuadratureResult quadrature_inner_product(const DeBrangesSpace& space, const EntireModel& f,
                                          const EntireModel& g, double tol);

/// G(j, l) = <s_j, s_l>, symmetrized to be exactly Hermitian.
Eigen::MatrixXcd gram_matrix(const DeBrangesKernel& space, std::span<const EntireModel> spanning);
Eigen::MatrixXcd gram_matrix(const DeBrangesSpace& space, std::span<const EntireModel> spanning);

struct PseudoInverse {
  Eigen::MatrixXcd matrix;
  int rank = 0;
  Eigen::VectorXd eigenvalues;  // ascending
};

constexpr double kDefaultRankTolerance = 1e-10;

/// Moore-Penrose inverse of a Hermitian positive semidefinite matrix,
/// dropping eigenvalues below rank_tolerance * (largest eigenvalue).
PseudoInverse pseudo_inverse(const Eigen::MatrixXcd& hermitian, double rank_tolerance = kDefaultRankTolerance);

}  // namespace debranges
