#include "debranges/entire_model.hpp"

#include <algorithm>
#include <cmath>

namespace debranges {

struct ZeroDividedTerm {
  EntireModel numerator;
  Complex node;
};

namespace {

constexpr double kNearNodeRadius = 1e-6;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

Complex times_i(Complex z) { return {-z.imag(), z.real()}; }

}  // namespace

struct EntireModel::Node {
  std::variant<ExponentialTerm, PolynomialTerm, KernelSectionTerm, LinearCombinationTerm, ProductTerm,
               ZeroDividedTerm>
      term;
};

// ---------------------------------------------------------------------------
// LogValue

LogValue LogValue::from(Complex v) {
  const double a = std::abs(v);
  if (a == 0.0) return {};
  return {std::log(a), v / a};
}

LogValue LogValue::from_exponent(Complex w) { return {w.real(), std::polar(1.0, w.imag())}; }

Complex LogValue::value() const {
  if (is_zero()) return {};
  return phase * std::exp(log_abs);
}

LogValue operator*(const LogValue& a, const LogValue& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return {a.log_abs + b.log_abs, a.phase * b.phase};
}

LogValue operator/(const LogValue& a, const LogValue& b) {
  if (b.is_zero()) throw DomainError("division by zero in log space");
  if (a.is_zero()) return {};
  return {a.log_abs - b.log_abs, a.phase / b.phase};
}

LogValue log_sum(std::span<const Complex> weights, std::span<const LogValue> terms) {
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < terms.size(); ++k)
    if (!terms[k].is_zero() && weights[k] != Complex{}) top = std::max(top, terms[k].log_abs);
  if (!std::isfinite(top)) return {};
  Complex acc{};
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (terms[k].is_zero()) continue;
    acc += weights[k] * terms[k].phase * std::exp(terms[k].log_abs - top);
  }
  LogValue out = LogValue::from(acc);
  if (!out.is_zero()) out.log_abs += top;
  return out;
}

// ---------------------------------------------------------------------------
// Kernel defaults

LogValue Kernel::log_value(Complex lambda, Complex z) const { return LogValue::from((*this)(lambda, z)); }

std::optional<SpectralDensity> Kernel::section_density(Complex) const { return std::nullopt; }

std::optional<SpectralDensity> Kernel::project(const SpectralDensity&) const { return std::nullopt; }

const std::string& Kernel::signature() const {
  std::call_once(signed_, [this] { signature_ = to_json().dump(); });
  return signature_;
}

bool same_kernel(const Kernel& a, const Kernel& b) { return &a == &b || a.signature() == b.signature(); }

// ---------------------------------------------------------------------------
// Construction and access

EntireModel EntireModel::exponential(double rate) {
  if (!std::isfinite(rate)) throw DomainError("exponential rate must be finite");
  return EntireModel(std::make_shared<const Node>(Node{ExponentialTerm{rate}}));
}

EntireModel EntireModel::polynomial(std::vector<Complex> coefficients) {
  if (coefficients.empty()) coefficients.push_back(Complex{});
  return EntireModel(std::make_shared<const Node>(Node{PolynomialTerm{std::move(coefficients)}}));
}

EntireModel::EntireModel() : EntireModel(constant(0.0)) {}

EntireModel EntireModel::constant(Complex value) { return polynomial({value}); }

EntireModel EntireModel::kernel_section(KernelPtr kernel, Complex node) {
  if (!kernel) throw DomainError("kernel section needs a kernel");
  if (!finite(node)) throw DomainError("kernel section node must be finite");
  return EntireModel(std::make_shared<const Node>(Node{KernelSectionTerm{std::move(kernel), node}}));
}

EntireModel EntireModel::linear_combination(std::vector<Complex> weights, std::vector<EntireModel> terms) {
  if (weights.size() != terms.size()) throw DomainError("linear combination: weight/term count mismatch");
  return EntireModel(
      std::make_shared<const Node>(Node{LinearCombinationTerm{std::move(weights), std::move(terms)}}));
}

EntireModel EntireModel::scaled(Complex weight, EntireModel term) {
  return linear_combination({weight}, {std::move(term)});
}

EntireModel EntireModel::product(std::vector<EntireModel> factors) {
  return EntireModel(std::make_shared<const Node>(Node{ProductTerm{std::move(factors)}}));
}

EntireModel EntireModel::zero_divided(EntireModel numerator, Complex node) {
  if (!finite(node)) throw DomainError("divisor node must be finite");
  return EntireModel(std::make_shared<const Node>(Node{ZeroDividedTerm{std::move(numerator), node}}));
}

EntireModel::Variant EntireModel::variant() const { return static_cast<Variant>(node_->term.index()); }

const ExponentialTerm& EntireModel::as_exponential() const { return std::get<ExponentialTerm>(node_->term); }
const PolynomialTerm& EntireModel::as_polynomial() const { return std::get<PolynomialTerm>(node_->term); }
const KernelSectionTerm& EntireModel::as_kernel_section() const {
  return std::get<KernelSectionTerm>(node_->term);
}
const LinearCombinationTerm& EntireModel::as_linear_combination() const {
  return std::get<LinearCombinationTerm>(node_->term);
}
const ProductTerm& EntireModel::as_product() const { return std::get<ProductTerm>(node_->term); }
const EntireModel& EntireModel::divided_numerator() const {
  return std::get<ZeroDividedTerm>(node_->term).numerator;
}
Complex EntireModel::divided_node() const { return std::get<ZeroDividedTerm>(node_->term).node; }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

Complex horner(const std::vector<Complex>& c, Complex z) {
  Complex v{};
  for (std::size_t k = c.size(); k-- > 0;) v = v * z + c[k];
  return v;
}

}  // namespace

Complex EntireModel::operator()(Complex z) const {
  if (!finite(z)) throw DomainError("evaluation point must be finite");
  return std::visit(
      [z](const auto& t) -> Complex {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ExponentialTerm>) {
          return std::exp(times_i(t.rate * z));
        } else if constexpr (std::is_same_v<T, PolynomialTerm>) {
          return horner(t.coefficients, z);
        } else if constexpr (std::is_same_v<T, KernelSectionTerm>) {
          return (*t.kernel)(t.node, z);
        } else if constexpr (std::is_same_v<T, LinearCombinationTerm>) {
          Complex s{};
          for (std::size_t k = 0; k < t.terms.size(); ++k) s += t.weights[k] * t.terms[k](z);
          return s;
        } else if constexpr (std::is_same_v<T, ProductTerm>) {
          Complex p{1.0, 0.0};
          for (const auto& f : t.factors) p *= f(z);
          return p;
        } else {
          const Complex dz = z - t.node;
          if (std::abs(dz) >= kNearNodeRadius) return t.numerator(z) / dz;
          return divided_difference_from_jet(taylor_jet(t.numerator, t.node), dz);
        }
      },
      node_->term);
}

LogValue EntireModel::log_value(Complex z) const {
  if (!finite(z)) throw DomainError("evaluation point must be finite");
  return std::visit(
      [z, this](const auto& t) -> LogValue {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ExponentialTerm>) {
          return LogValue::from_exponent(times_i(t.rate * z));
        } else if constexpr (std::is_same_v<T, PolynomialTerm>) {
          return LogValue::from(horner(t.coefficients, z));
        } else if constexpr (std::is_same_v<T, KernelSectionTerm>) {
          return t.kernel->log_value(t.node, z);
        } else if constexpr (std::is_same_v<T, LinearCombinationTerm>) {
          std::vector<LogValue> parts;
          parts.reserve(t.terms.size());
          for (const auto& f : t.terms) parts.push_back(f.log_value(z));
          return log_sum(t.weights, parts);
        } else if constexpr (std::is_same_v<T, ProductTerm>) {
          LogValue p = LogValue::from(Complex{1.0, 0.0});
          for (const auto& f : t.factors) p = p * f.log_value(z);
          return p;
        } else {
          const Complex dz = z - t.node;
          if (std::abs(dz) >= kNearNodeRadius) return t.numerator.log_value(z) / LogValue::from(dz);
          return LogValue::from((*this)(z));
        }
      },
      node_->term);
}

EntireModel EntireModel::star() const {
  return std::visit(
      [](const auto& t) -> EntireModel {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ExponentialTerm>) {
          return exponential(-t.rate);
        } else if constexpr (std::is_same_v<T, PolynomialTerm>) {
          std::vector<Complex> c(t.coefficients.size());
          std::transform(t.coefficients.begin(), t.coefficients.end(), c.begin(),
                         [](Complex v) { return std::conj(v); });
          return polynomial(std::move(c));
        } else if constexpr (std::is_same_v<T, KernelSectionTerm>) {
          return kernel_section(t.kernel->reflected(), std::conj(t.node));
        } else if constexpr (std::is_same_v<T, LinearCombinationTerm>) {
          std::vector<Complex> w(t.weights.size());
          std::vector<EntireModel> terms;
          terms.reserve(t.terms.size());
          for (std::size_t k = 0; k < t.terms.size(); ++k) {
            w[k] = std::conj(t.weights[k]);
            terms.push_back(t.terms[k].star());
          }
          return linear_combination(std::move(w), std::move(terms));
        } else if constexpr (std::is_same_v<T, ProductTerm>) {
          std::vector<EntireModel> factors;
          factors.reserve(t.factors.size());
          for (const auto& f : t.factors) factors.push_back(f.star());
          return product(std::move(factors));
        } else {
          return zero_divided(t.numerator.star(), std::conj(t.node));
        }
      },
      node_->term);
}

// ---------------------------------------------------------------------------
// Taylor jets

namespace {

TaylorJet finite_difference_jet(const EntireModel& f, Complex z0) {
  const double h = 1e-4 * std::max(1.0, std::abs(z0));
  auto stencil = [&](double step) {
    const Complex fm2 = f(z0 - 2.0 * step), fm1 = f(z0 - step), f0 = f(z0), fp1 = f(z0 + step),
                  fp2 = f(z0 + 2.0 * step);
    std::array<Complex, 5> d{};
    d[0] = f0;
    d[1] = (fp1 - fm1) / (2.0 * step);
    d[2] = (fp1 - 2.0 * f0 + fm1) / (step * step);
    d[3] = (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / (2.0 * step * step * step);
    d[4] = (fp2 - 4.0 * fp1 + 6.0 * f0 - 4.0 * fm1 + fm2) / (step * step * step * step);
    return d;
  };
  const auto coarse = stencil(h);
  const auto fine = stencil(h / 2.0);
  constexpr std::array<double, 5> factorial{1.0, 1.0, 2.0, 6.0, 24.0};
  TaylorJet jet{};
  jet[0] = coarse[0];
  for (int k = 1; k <= kJetOrder; ++k) jet[k] = (4.0 * fine[k] - coarse[k]) / 3.0 / factorial[k];
  return jet;
}

}  // namespace

TaylorJet taylor_jet(const EntireModel& f, Complex z0) {
  switch (f.variant()) {
    case EntireModel::Variant::exponential: {
      const Complex ia = Complex(0.0, f.as_exponential().rate);
      TaylorJet jet{};
      Complex term = std::exp(ia * z0);
      for (int k = 0; k <= kJetOrder; ++k) {
        jet[k] = term;
        term *= ia / static_cast<double>(k + 1);
      }
      return jet;
    }
    case EntireModel::Variant::polynomial: {
      std::vector<Complex> b = f.as_polynomial().coefficients;
      TaylorJet jet{};
      for (int k = 0; k <= kJetOrder && !b.empty(); ++k) {
        const std::size_t n = b.size();
        std::vector<Complex> q(n - 1);
        Complex r = b[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) {
          q[i] = r;
          r = r * z0 + b[i];
        }
        jet[k] = r;
        b = std::move(q);
      }
      return jet;
    }
    case EntireModel::Variant::linear_combination: {
      const auto& lc = f.as_linear_combination();
      TaylorJet jet{};
      for (std::size_t t = 0; t < lc.terms.size(); ++t) {
        const auto part = taylor_jet(lc.terms[t], z0);
        for (int k = 0; k <= kJetOrder; ++k) jet[k] += lc.weights[t] * part[k];
      }
      return jet;
    }
    case EntireModel::Variant::product: {
      TaylorJet jet{};
      jet[0] = 1.0;
      for (const auto& factor : f.as_product().factors) {
        const auto part = taylor_jet(factor, z0);
        TaylorJet next{};
        for (int i = 0; i <= kJetOrder; ++i)
          for (int j = 0; i + j <= kJetOrder; ++j) next[i + j] += jet[i] * part[j];
        jet = next;
      }
      return jet;
    }
    default:
      return finite_difference_jet(f, z0);
  }
}

Complex divided_difference_from_jet(const TaylorJet& jet, Complex dz) {
  Complex v{};
  for (int k = kJetOrder; k >= 1; --k) v = v * dz + jet[k];
  return v;
}

// ---------------------------------------------------------------------------
// Spectral densities and flattening

std::optional<SpectralDensity> spectral_density(const EntireModel& f) {
  switch (f.variant()) {
    case EntireModel::Variant::kernel_section: {
      const auto& s = f.as_kernel_section();
      return s.kernel->section_density(s.node);
    }
    case EntireModel::Variant::linear_combination: {
      const auto& lc = f.as_linear_combination();
      SpectralDensity total;
      for (std::size_t k = 0; k < lc.terms.size(); ++k) {
        auto part = spectral_density(lc.terms[k]);
        if (!part) return std::nullopt;
        total += part->scaled(lc.weights[k]);
      }
      return total;
    }
    case EntireModel::Variant::product: {
      double shift = 0.0;
      Complex scale{1.0, 0.0};
      std::optional<SpectralDensity> body;
      for (const auto& factor : f.as_product().factors) {
        if (factor.variant() == EntireModel::Variant::exponential) {
          shift += factor.as_exponential().rate;
        } else if (factor.variant() == EntireModel::Variant::polynomial &&
                   factor.as_polynomial().coefficients.size() == 1) {
          scale *= factor.as_polynomial().coefficients[0];
        } else {
          if (body) return std::nullopt;
          body = spectral_density(factor);
          if (!body) return std::nullopt;
        }
      }
      if (!body) return std::nullopt;
      return body->shifted(shift).scaled(scale);
    }
    case EntireModel::Variant::zero_divided: {
      auto num = spectral_density(f.divided_numerator());
      if (!num) return std::nullopt;
      return num->divided(f.divided_node());
    }
    case EntireModel::Variant::polynomial: {
      const auto& c = f.as_polynomial().coefficients;
      if (std::all_of(c.begin(), c.end(), [](Complex v) { return v == Complex{}; })) return SpectralDensity{};
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

std::vector<std::pair<Complex, EntireModel>> flatten_terms(const EntireModel& f) {
  std::vector<std::pair<Complex, EntireModel>> out;
  if (f.variant() != EntireModel::Variant::linear_combination) {
    out.emplace_back(Complex{1.0, 0.0}, f);
    return out;
  }
  const auto& lc = f.as_linear_combination();
  for (std::size_t k = 0; k < lc.terms.size(); ++k) {
    for (auto& [w, leaf] : flatten_terms(lc.terms[k])) out.emplace_back(lc.weights[k] * w, std::move(leaf));
  }
  return out;
}

HermiteBiehlerReport hermite_biehler_check(const EntireModel& e, std::span<const Complex> grid) {
  if (grid.empty()) throw PreconditionError("Hermite-Biehler check needs a non-empty grid");
  for (const Complex z : grid)
    if (!(z.imag() > 0.0)) throw PreconditionError("Hermite-Biehler grid points must lie in the upper half-plane");
  const EntireModel es = e.star();
  HermiteBiehlerReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (const Complex z : grid) {
    const double margin = std::abs(e(z)) - std::abs(es(z));
    if (margin < report.worst_margin) {
      report.worst_margin = margin;
      report.worst_point = z;
    }
  }
  report.passed = report.worst_margin > 0.0;
  return report;
}

}  // namespace debranges
