#include "debranges/space.hpp"

#include <cmath>
#include <numbers>

#include "debranges/json_io.hpp"

namespace debranges {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNearDiagonal = 1e-6;
const Complex kTwoPiI{0.0, 2.0 * kPi};

LogValue conj(const LogValue& v) { return {v.log_abs, std::conj(v.phase)}; }

bool is_section_of(const EntireModel& leaf, const Kernel& kernel) {
  return leaf.variant() == EntireModel::Variant::kernel_section &&
         same_kernel(*leaf.as_kernel_section().kernel, kernel);
}

}  // namespace

// ---------------------------------------------------------------------------
// Kernels

Complex sinc_kernel(double tau, Complex w) {
  if (std::abs(w) < kNearDiagonal) {
    const Complex tw = tau * w;
    return tau / kPi * (1.0 - tw * tw / 6.0);
  }
  return std::sin(tau * w) / (kPi * w);
}

LogValue log_sinc_kernel(double tau, Complex w) {
  if (std::abs(w) < 1e-3) return LogValue::from(sinc_kernel(tau, w));
  const Complex itw{-tau * w.imag(), tau * w.real()};
  const std::array<LogValue, 2> parts{LogValue::from_exponent(itw), LogValue::from_exponent(-itw)};
  const std::array<Complex, 2> weights{1.0, -1.0};
  return log_sum(weights, parts) / LogValue::from(kTwoPiI * w);
}

DeBrangesKernel::DeBrangesKernel(EntireModel e) : e_(std::move(e)), e_star_(e_.star()) {
  if (e_.variant() == EntireModel::Variant::exponential && e_.as_exponential().rate < 0.0)
    tau_ = -e_.as_exponential().rate;
}

Complex DeBrangesKernel::operator()(Complex lambda, Complex z) const {
  const Complex w = z - std::conj(lambda);
  if (tau_) return sinc_kernel(*tau_, w);
  const Complex a = std::conj(e_(lambda));
  const Complex b = std::conj(e_star_(lambda));
  if (std::abs(w) >= kNearDiagonal) return -(e_(z) * a - e_star_(z) * b) / (kTwoPiI * w);
  // The numerator vanishes at z = conj(lambda); use its Taylor expansion there.
  const Complex center = std::conj(lambda);
  const auto je = taylor_jet(e_, center);
  const auto js = taylor_jet(e_star_, center);
  TaylorJet numerator{};
  for (int k = 0; k <= kJetOrder; ++k) numerator[k] = a * je[k] - b * js[k];
  return -divided_difference_from_jet(numerator, w) / kTwoPiI;
}

LogValue DeBrangesKernel::log_value(Complex lambda, Complex z) const {
  const Complex w = z - std::conj(lambda);
  if (tau_) return log_sinc_kernel(*tau_, w);
  if (std::abs(w) < 1e-3) return LogValue::from((*this)(lambda, z));
  const std::array<LogValue, 2> parts{e_.log_value(z) * conj(e_.log_value(lambda)),
                                      e_star_.log_value(z) * conj(e_star_.log_value(lambda))};
  const std::array<Complex, 2> weights{1.0, -1.0};
  return log_sum(weights, parts) / LogValue::from(-kTwoPiI * w);
}

std::optional<SpectralDensity> DeBrangesKernel::section_density(Complex lambda) const {
  if (!tau_) return std::nullopt;
  const Complex rate = Complex(0.0, -1.0) * std::conj(lambda);
  return SpectralDensity::exponential(-*tau_, *tau_, 1.0 / (2.0 * kPi), rate);
}

std::optional<SpectralDensity> DeBrangesKernel::project(const SpectralDensity& f) const {
  if (!tau_) return std::nullopt;
  return f.restricted(-*tau_, *tau_);
}

nlohmann::json DeBrangesKernel::to_json() const {
  return {{"kind", "de_branges"}, {"E", model_to_json(e_)}};
}

// ---------------------------------------------------------------------------
// Space

std::vector<Complex> DeBrangesSpace::validation_grid() {
  std::vector<Complex> grid;
  for (double y : {0.25, 1.0, 3.0})
    for (int x = -3; x <= 3; ++x) grid.emplace_back(static_cast<double>(x), y);
  return grid;
}

DeBrangesSpace::DeBrangesSpace(EntireModel e, std::string label)
    : kernel_(std::make_shared<const DeBrangesKernel>(std::move(e))), label_(std::move(label)) {
  const auto grid = validation_grid();
  const auto report = hermite_biehler_check(kernel_->e(), grid);
  if (!report.passed)
    throw DomainError("E is not a de Branges function: |E(z)| - |E*(z)| = " +
                      std::to_string(report.worst_margin) + " at z = (" +
                      std::to_string(report.worst_point.real()) + ", " +
                      std::to_string(report.worst_point.imag()) + ")");
}

// ---------------------------------------------------------------------------
// Inner products

Complex inner_product(const DeBrangesKernel& space, const EntireModel& f, const EntireModel& g,
                      InnerProductRoute route) {
  const auto terms_f = flatten_terms(f);
  const auto terms_g = flatten_terms(g);
  const bool pw = space.paley_wiener_type().has_value();
  if (route == InnerProductRoute::spectral && !pw)
    throw UnsupportedRepresentation("spectral inner products need a Paley-Wiener space");

  std::vector<std::optional<SpectralDensity>> dens_f(terms_f.size()), dens_g(terms_g.size());
  std::vector<bool> tried_f(terms_f.size(), false), tried_g(terms_g.size(), false);
  auto density = [](auto& cache, auto& tried, const auto& terms, std::size_t k) -> const auto& {
    if (!tried[k]) {
      cache[k] = spectral_density(terms[k].second);
      tried[k] = true;
    }
    return cache[k];
  };

  Complex total{};
  for (std::size_t a = 0; a < terms_f.size(); ++a) {
    const auto& [wf, tf] = terms_f[a];
    for (std::size_t b = 0; b < terms_g.size(); ++b) {
      const auto& [wg, tg] = terms_g[b];
      const Complex weight = wf * std::conj(wg);
      if (weight == Complex{}) continue;
      if (route != InnerProductRoute::spectral) {
        if (is_section_of(tg, space)) {
          total += weight * tf(tg.as_kernel_section().node);
          continue;
        }
        if (is_section_of(tf, space)) {
          total += weight * std::conj(tg(tf.as_kernel_section().node));
          continue;
        }
        if (tf.variant() == EntireModel::Variant::kernel_section &&
            tg.variant() == EntireModel::Variant::kernel_section) {
          const auto& sf = tf.as_kernel_section();
          const auto& sg = tg.as_kernel_section();
          const Kernel* amb = sf.kernel->ambient();
          if (amb && same_kernel(*sf.kernel, *sg.kernel) && same_kernel(*amb, space)) {
            total += weight * (*sf.kernel)(sf.node, sg.node);
            continue;
          }
        }
      }
      if (route != InnerProductRoute::reproducing && pw) {
        const auto& df = density(dens_f, tried_f, terms_f, a);
        const auto& dg = density(dens_g, tried_g, terms_g, b);
        if (df && dg) {
          total += weight * spectral_inner(*df, *dg);
          continue;
        }
      }
      throw UnsupportedRepresentation(
          "inner product: model outside the kernel-combination family; use the quadrature cross-check");
    }
  }
  return total;
}

Complex inner_product(const DeBrangesSpace& space, const EntireModel& f, const EntireModel& g,
                      InnerProductRoute route) {
  return inner_product(*space.kernel_ptr(), f, g, route);
}

double norm(const DeBrangesSpace& space, const EntireModel& f, InnerProductRoute route) {
  return std::sqrt(std::max(0.0, inner_product(space, f, f, route).real()));
}

QuadratureResult quadrature_inner_product(const DeBrangesSpace& space, const EntireModel& f,
                                          const EntireModel& g, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("quadrature tolerance must be positive");
  constexpr std::size_t kBudget = std::size_t{1} << 24;
  const EntireModel& e = space.e();
  std::size_t samples = 0;
  auto integrand = [&](double x) {
    ++samples;
    const Complex ex = e(Complex(x, 0.0));
    return f(Complex(x, 0.0)) * std::conj(g(Complex(x, 0.0))) / std::norm(ex);
  };
  auto over_budget = [&](Complex best, double window, double step) {
    if (samples > kBudget)
      throw AccuracyError("quadrature budget exhausted at window " + std::to_string(window) + ", step " +
                              std::to_string(step),
                          best);
  };

  double window = 64.0;
  double step = 0.25;
  if (auto tau = space.paley_wiener_type()) step = std::min(step, kPi / (4.0 * *tau));

  auto window_sum = [&](double h, double x_max) {
    const auto n = static_cast<long>(std::floor(x_max / h));
    Complex s = integrand(0.0);
    for (long k = 1; k <= n; ++k) s += integrand(k * h) + integrand(-k * h);
    return h * s;
  };
  Complex total = window_sum(step, window);
  for (;;) {
    const auto lo = static_cast<long>(std::floor(window / step));
    const auto hi = static_cast<long>(std::floor(2.0 * window / step));
    Complex octave{};
    for (long k = lo + 1; k <= hi; ++k) octave += integrand(k * step) + integrand(-k * step);
    octave *= step;
    total += octave;
    window *= 2.0;
    over_budget(total, window, step);
    if (std::abs(octave) < tol / 2.0) break;
  }
  for (;;) {
    const double half = step / 2.0;
    const auto n = static_cast<long>(std::floor(window / half));
    Complex odd{};
    for (long k = 1; k <= n; k += 2) odd += integrand(k * half) + integrand(-k * half);
    const Complex refined = total / 2.0 + half * odd;
    const double change = std::abs(refined - total);
    total = refined;
    step = half;
    over_budget(total, window, step);
    if (change < tol / 2.0) break;
  }
  return {total, window, step, samples};
}

// ---------------------------------------------------------------------------
// Gram matrices

Eigen::MatrixXcd gram_matrix(const DeBrangesKernel& space, std::span<const EntireModel> spanning) {
  const auto n = static_cast<Eigen::Index>(spanning.size());
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    g(j, j) = inner_product(space, spanning[j], spanning[j]).real();
    for (Eigen::Index l = j + 1; l < n; ++l) {
      g(j, l) = inner_product(space, spanning[j], spanning[l]);
      g(l, j) = std::conj(g(j, l));
    }
  }
  return g;
}

Eigen::MatrixXcd gram_matrix(const DeBrangesSpace& space, std::span<const EntireModel> spanning) {
  return gram_matrix(*space.kernel_ptr(), spanning);
}

PseudoInverse pseudo_inverse(const Eigen::MatrixXcd& hermitian, double rank_tolerance) {
  PseudoInverse out;
  const auto n = hermitian.rows();
  out.matrix = Eigen::MatrixXcd::Zero(n, n);
  if (n == 0) return out;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian);
  out.eigenvalues = solver.eigenvalues();
  const double top = out.eigenvalues.cwiseAbs().maxCoeff();
  if (!(top > 0.0)) return out;
  const Eigen::MatrixXcd& v = solver.eigenvectors();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double ev = out.eigenvalues(k);
    if (ev <= rank_tolerance * top) continue;
    out.matrix += (v.col(k) / ev) * v.col(k).adjoint();
    ++out.rank;
  }
  return out;
}

}  // namespace debranges
