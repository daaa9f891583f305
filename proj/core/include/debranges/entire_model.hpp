#pragma once

// Closed family of entire-function models with an exact star involution
// f*(z) = conj(f(conj z)).

#include <array>
#include <limits>
#include <mutex>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "debranges/errors.hpp"
#include "debranges/spectral.hpp"

namespace debranges {

/// A complex number kept as log-modulus plus unit phase, so that values like
/// e^{4000} can be combined without overflow.
struct LogValue {
  double log_abs = -std::numeric_limits<double>::infinity();
  Complex phase{};

  static LogValue from(Complex v);
  static LogValue from_exponent(Complex w);  // e^{w}
  Complex value() const;
  bool is_zero() const { return phase == Complex{}; }

  friend LogValue operator*(const LogValue& a, const LogValue& b);
  friend LogValue operator/(const LogValue& a, const LogValue& b);
};

/// Sum of weighted log values without leaving log space.
LogValue log_sum(std::span<const Complex> weights, std::span<const LogValue> terms);

class Kernel;
using KernelPtr = std::shared_ptr<const Kernel>;

/// Two-variable kernel k(lambda, z), entire in z. Implementations live with
/// the space machinery; the model family only needs evaluation and the
/// reflection rule that keeps star closed.
class Kernel : public std::enable_shared_from_this<Kernel> {
 public:
  virtual ~Kernel() = default;

  virtual Complex operator()(Complex lambda, Complex z) const = 0;
  virtual LogValue log_value(Complex lambda, Complex z) const;

  /// Kernel K#(lambda, z) = conj(K(conj lambda, conj z)), so that
  /// star(section(K, lambda)) = section(K#, conj lambda).
  virtual KernelPtr reflected() const = 0;

  /// Spectral density of the section k(lambda, .), when the kernel lives in
  /// a Paley-Wiener space.
  virtual std::optional<SpectralDensity> section_density(Complex lambda) const;

  /// Orthogonal projection onto the subspace this kernel reproduces, acting
  /// on spectral densities.
  virtual std::optional<SpectralDensity> project(const SpectralDensity& f) const;

  /// Ambient de Branges kernel whose space contains (isometrically) the
  /// subspace reproduced by this kernel; the kernel itself for a de Branges
  /// kernel, null when unknown.
  virtual const Kernel* ambient() const { return nullptr; }

  virtual nlohmann::json to_json() const = 0;

  /// Canonical text used to compare kernels structurally.
  const std::string& signature() const;

 private:
  mutable std::string signature_;
  mutable std::once_flag signed_;
};

bool same_kernel(const Kernel& a, const Kernel& b);

class EntireModel;

struct ExponentialTerm {
  double rate = 0.0;  // z -> e^{i rate z}
};

struct PolynomialTerm {
  std::vector<Complex> coefficients;  // ascending powers
};

struct KernelSectionTerm {
  KernelPtr kernel;
  Complex node{};  // z -> kernel(node, z)
};

struct LinearCombinationTerm {
  std::vector<Complex> weights;
  std::vector<EntireModel> terms;
};

struct ProductTerm {
  std::vector<EntireModel> factors;
};

/// Immutable tree of entire functions. Copies share structure.
class EntireModel {
 public:
  enum class Variant { exponential, polynomial, kernel_section, linear_combination, product, zero_divided };

  /// The zero function.
  EntireModel();

  static EntireModel exponential(double rate);
  static EntireModel polynomial(std::vector<Complex> coefficients);
  static EntireModel constant(Complex value);
  static EntireModel kernel_section(KernelPtr kernel, Complex node);
  static EntireModel linear_combination(std::vector<Complex> weights, std::vector<EntireModel> terms);
  static EntireModel scaled(Complex weight, EntireModel term);
  static EntireModel product(std::vector<EntireModel> factors);
  static EntireModel zero_divided(EntireModel numerator, Complex node);

  Variant variant() const;

  const ExponentialTerm& as_exponential() const;
  const PolynomialTerm& as_polynomial() const;
  const KernelSectionTerm& as_kernel_section() const;
  const LinearCombinationTerm& as_linear_combination() const;
  const ProductTerm& as_product() const;
  const EntireModel& divided_numerator() const;
  Complex divided_node() const;

  /// Value at z; throws DomainError for non-finite z.
  Complex operator()(Complex z) const;

  LogValue log_value(Complex z) const;

  EntireModel star() const;

 private:
  struct Node;
  explicit EntireModel(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

constexpr int kJetOrder = 4;
using TaylorJet = std::array<Complex, kJetOrder + 1>;

/// Taylor coefficients f^{(k)}(z0)/k!, k = 0..4. Analytic for exponentials,
/// polynomials, sums and products; Richardson-extrapolated central differences
/// with step 1e-4 max(1, |z0|) otherwise.
TaylorJet taylor_jet(const EntireModel& f, Complex z0);

/// Value of (f(z) - f(mu)) / (z - mu) from a jet of f at mu, for z near mu.
Complex divided_difference_from_jet(const TaylorJet& jet, Complex dz);

/// Spectral density of the model when every leaf admits one.
std::optional<SpectralDensity> spectral_density(const EntireModel& f);

/// Flattens nested linear combinations into (weight, leaf) pairs.
std::vector<std::pair<Complex, EntireModel>> flatten_terms(const EntireModel& f);

struct HermiteBiehlerReport {
  bool passed = false;
  double worst_margin = 0.0;  // min |E(z)| - |E*(z)|
  Complex worst_point{};
};

/// |E(z)| > |E*(z)| on every (strictly upper half-plane) grid point.
HermiteBiehlerReport hermite_biehler_check(const EntireModel& e, std::span<const Complex> grid);

}  // namespace debranges
