#include "debranges/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "debranges/grids.hpp"
#include "debranges/json_io.hpp"
#include "debranges/near_invariance.hpp"

namespace debranges {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex times_i(Complex z) { return {-z.imag(), z.real()}; }

Complex half_root_u(double alpha, Complex z) { return std::exp(times_i(0.5 * alpha * z)); }

template <typename Fn>
auto staged(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (Error& e) {
    if (e.stage().empty()) e.set_stage(stage);
    throw;
  }
}

double wrap_phase(double phi) {
  phi = std::remainder(phi, kTwoPi);
  return phi <= -std::numbers::pi ? phi + kTwoPi : phi;
}

double axis_rate(const EntireModel& f, double direction) {
  auto log_abs = [&](double y) {
    const LogValue v = f.log_value({0.0, direction * y});
    if (v.is_zero() || !std::isfinite(v.log_abs))
      throw EstimationError("exponential_type: model vanishes or overflows on the imaginary axis");
    return v.log_abs;
  };
  double last = 0.0;
  double spread = std::numeric_limits<double>::infinity();
  for (double base : {8.0, 64.0, 512.0, 4096.0}) {
    double slope[3];
    for (int k = 0; k < 3; ++k) {
      const double y = base * std::ldexp(1.0, k);
      slope[k] = (log_abs(2.0 * y) - log_abs(y)) / y;
    }
    const double coarse = 2.0 * slope[1] - slope[0];
    last = 2.0 * slope[2] - slope[1];
    spread = std::abs(last - coarse);
    if (spread <= 1e-9 * std::max(1.0, std::abs(last))) return last;
  }
  if (spread > 1e-3) throw EstimationError("exponential_type: estimates did not settle");
  return last;
}

}  // namespace

FGPair extract_fg(const SubspaceModel& sub, Complex anchor) {
  const Kernel& k = *sub.kernel();
  const Complex conj_anchor = std::conj(anchor);
  FGPair out;
  out.diagonal_at_anchor = k(anchor, anchor).real();
  out.diagonal_at_conjugate_anchor = k(conj_anchor, conj_anchor).real();
  std::vector<Complex> bad;
  const double ref_lo = sub.ambient().kernel(anchor, anchor).real();
  const double ref_hi = sub.ambient().kernel(conj_anchor, conj_anchor).real();
  if (!(out.diagonal_at_anchor > 1e-12 * ref_lo)) bad.push_back(anchor);
  if (!(out.diagonal_at_conjugate_anchor > 1e-12 * ref_hi)) bad.push_back(conj_anchor);
  if (!bad.empty()) throw CommonZeroError("extract_fg: subspace kernel vanishes at the anchor", bad);

  auto build = [&](Complex node, double diagonal) {
    const EntireModel linear = EntireModel::polynomial({-std::conj(node), 1.0});
    return EntireModel::scaled(1.0 / std::sqrt(diagonal), EntireModel::product({sub.section(node), linear}));
  };
  out.f = build(anchor, out.diagonal_at_anchor);
  out.g = build(conj_anchor, out.diagonal_at_conjugate_anchor);
  return out;
}

FGResiduals verify_fg_identities(const EntireModel& f, const EntireModel& g, std::span<const double> real_grid,
                                 std::span<const Complex> lower_grid, std::span<const Complex> upper_grid,
                                 std::span<const Complex> extra) {
  if (real_grid.empty() || lower_grid.empty() || upper_grid.empty())
    throw PreconditionError("verify_fg_identities: grids must be nonempty");
  for (Complex z : lower_grid)
    if (!(z.imag() < 0.0)) throw PreconditionError("verify_fg_identities: lower grid point off the lower half-plane");
  for (Complex z : upper_grid)
    if (!(z.imag() > 0.0)) throw PreconditionError("verify_fg_identities: upper grid point off the upper half-plane");

  const EntireModel fs = f.star();
  const EntireModel gs = g.star();
  FGResiduals r;
  auto identity_at = [&](Complex z) {
    const Complex ff = fs(z) * f(z);
    const Complex gg = gs(z) * g(z);
    r.identity = std::max(r.identity, std::abs(ff - gg) / (1.0 + std::abs(ff) + std::abs(gg)));
  };
  for (double x : real_grid) {
    identity_at(x);
    const double af = std::abs(f(x));
    r.real_equality = std::max(r.real_equality, std::abs(af - std::abs(g(x))) / (1.0 + af));
  }
  r.margin_lower = std::numeric_limits<double>::infinity();
  for (Complex z : lower_grid) {
    identity_at(z);
    r.margin_lower = std::min(r.margin_lower, std::abs(f(z)) - std::abs(g(z)));
  }
  r.margin_upper = std::numeric_limits<double>::infinity();
  for (Complex z : upper_grid) {
    identity_at(z);
    r.margin_upper = std::min(r.margin_upper, std::abs(g(z)) - std::abs(f(z)));
  }
  for (Complex z : extra) identity_at(z);
  return r;
}

Complex compute_u(const EntireModel& f, const EntireModel& g, Complex z) {
  const Complex fz = f(z);
  if (std::abs(fz) < 1e-300) throw PoleIndicatorError("compute_u: F vanishes, U would have a pole");
  return std::conj(g(std::conj(z))) / fz;
}

ExponentFit fit_exponent(std::span<const USample> samples, std::optional<double> bound) {
  const std::size_t n = samples.size();
  if (n < 8) throw PreconditionError("fit_exponent: need at least 8 samples");
  const double step = samples[1].first - samples[0].first;
  if (!(step > 0.0)) throw PreconditionError("fit_exponent: samples must be increasing");
  for (std::size_t k = 1; k < n; ++k)
    if (std::abs(samples[k].first - samples[k - 1].first - step) > 1e-8 * step)
      throw PreconditionError("fit_exponent: samples must lie on a uniform grid");
  if (bound && step > std::numbers::pi / (2.0 * *bound) * (1.0 + 1e-12))
    throw AliasingError("fit_exponent: grid spacing too coarse for the exponent bound");

  ExponentFit fit;
  for (const auto& [x, u] : samples) fit.unimodularity = std::max(fit.unimodularity, std::abs(std::abs(u) - 1.0));
  if (fit.unimodularity > 1e-6)
    throw NotUnimodularError("fit_exponent: |U| departs from 1 by " + std::to_string(fit.unimodularity));

  std::vector<double> phase(n);
  phase[0] = std::arg(samples[0].second);
  for (std::size_t k = 1; k < n; ++k) {
    const double jump = std::arg(samples[k].second / samples[k - 1].second);
    if (std::abs(jump) > 0.9 * std::numbers::pi)
      throw AliasingError("fit_exponent: phase jump between adjacent samples is too large; refine the grid");
    phase[k] = phase[k - 1] + jump;
  }

  double mx = 0.0, mp = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += samples[k].first;
    mp += phase[k];
  }
  mx /= static_cast<double>(n);
  mp /= static_cast<double>(n);
  double sxx = 0.0, sxp = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = samples[k].first - mx;
    sxx += dx * dx;
    sxp += dx * (phase[k] - mp);
  }
  fit.alpha = sxp / sxx;
  fit.offset = wrap_phase(mp - fit.alpha * mx);
  for (const auto& [x, u] : samples)
    fit.residual = std::max(fit.residual, std::abs(u - std::exp(Complex{0.0, fit.alpha * x})));
  return fit;
}

EntireModel assemble_e0(const EntireModel&, const EntireModel& g, double alpha) {
  EntireModel e0 = EntireModel::scaled(std::sqrt(kTwoPi), EntireModel::product({g, EntireModel::exponential(alpha / 2.0)}));
  const auto hb = hermite_biehler_check(e0, DeBrangesSpace::validation_grid());
  if (!hb.passed)
    throw ExtractionInconsistentError("assemble_e0: E0 is not Hermite-Biehler (margin " +
                                      std::to_string(hb.worst_margin) + ")");
  return e0;
}

double exponential_type(const EntireModel& f) {
  if (f.variant() == EntireModel::Variant::exponential) return std::abs(f.as_exponential().rate);
  if (f.variant() == EntireModel::Variant::polynomial) {
    for (Complex c : f.as_polynomial().coefficients)
      if (c != Complex{}) return 0.0;
    throw EstimationError("exponential_type: zero polynomial");
  }
  return std::max(axis_rate(f, 1.0), axis_rate(f, -1.0));
}

Tolerances Tolerances::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw PreconditionError("tolerance scale must be positive");
  Tolerances t = *this;
  t.identity *= factor;
  t.margin *= factor;
  t.unimodularity *= factor;
  t.exponent_fit *= factor;
  t.roundtrip *= factor;
  t.isometry *= factor;
  return t;
}

bool StructureReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.second; });
}

StructureResult verify_structure(const SubspaceModel& sub, const StructureOptions& options) {
  const Tolerances& tol = options.tolerances;
  double bound = options.exponent_bound;
  if (!(bound > 0.0)) {
    const auto a = sub.ambient().paley_wiener_type();
    if (!a) throw PreconditionError("verify_structure: an exponent bound is required outside Paley-Wiener spaces");
    bound = 2.0 * *a;
  }

  Rng rng(options.seed);
  const auto disk = random_disk(rng, options.identity_points, 5.0);
  const auto upper = options.upper_grid ? *options.upper_grid
                                        : random_box(rng, options.half_plane_points, -5.0, 5.0, 0.05, 3.0);
  std::vector<Complex> lower;
  if (options.lower_grid) {
    lower = *options.lower_grid;
  } else {
    for (Complex z : random_box(rng, options.half_plane_points, -5.0, 5.0, 0.05, 3.0)) lower.push_back(std::conj(z));
  }
  const auto rt_nodes = random_box(rng, options.roundtrip_points, -3.0, 3.0, -2.0, 2.0);
  const auto rt_points = random_box(rng, options.roundtrip_points, -3.0, 3.0, -2.0, 2.0);
  const auto real = options.real_grid ? *options.real_grid : exponent_grid(bound);

  staged("common_zero_scan", [&] {
    auto zeros = common_zero_scan(sub, standard_scan_grid());
    if (!zeros.empty()) throw CommonZeroError("subspace has common zeros on the scan grid", std::move(zeros));
    return 0;
  });

  StructureResult result;
  KernelDecomposition& dec = result.decomposition;
  StructureReport& rep = result.report;

  const FGPair fg = staged("extract_fg", [&] { return extract_fg(sub); });
  dec.f = fg.f;
  dec.g = fg.g;
  dec.anchor = kAnchor;
  dec.normalization = std::sqrt(kTwoPi);

  rep.fg = staged("fg_identities", [&] { return verify_fg_identities(fg.f, fg.g, real, lower, upper, disk); });

  staged("compute_u", [&] {
    for (double x : real) dec.u_samples.emplace_back(x, compute_u(fg.f, fg.g, x));
    return 0;
  });

  const ExponentFit fit = staged("fit_exponent", [&] { return fit_exponent(dec.u_samples, bound); });
  dec.alpha = fit.alpha;
  dec.fit_residual = fit.residual;
  rep.alpha = fit.alpha;
  rep.phase_offset = fit.offset;
  rep.unimodularity = fit.unimodularity;
  rep.exponent_fit = fit.residual;

  dec.e0 = staged("assemble_e0", [&] { return assemble_e0(fg.f, fg.g, fit.alpha); });
  rep.e0 = model_to_json(dec.e0);

  const auto k0 = std::make_shared<const DeBrangesKernel>(dec.e0);
  const Kernel& kn = *sub.kernel();
  const double alpha = fit.alpha;

  rep.kernel_roundtrip = staged("kernel_roundtrip", [&] {
    double worst = 0.0;
    for (Complex lambda : rt_nodes) {
      const Complex ul = half_root_u(alpha, lambda);
      const double dl = kn(lambda, lambda).real();
      for (Complex z : rt_points) {
        const Complex uz = half_root_u(alpha, z);
        const Complex lhs = std::conj(ul) * uz * kn(lambda, z);
        const double scale = std::abs(ul) * std::abs(uz) * std::sqrt(dl * kn(z, z).real());
        worst = std::max(worst, std::abs(lhs - (*k0)(lambda, z)) / scale);
      }
    }
    return worst;
  });

  rep.isometry = staged("isometry", [&] {
    double worst = 0.0;
    for (int m = 0; m < options.isometry_members; ++m) {
      const auto nodes = random_box(rng, 3, -3.0, 3.0, 0.1, 2.0);
      std::vector<Complex> weights;
      std::vector<EntireModel> terms;
      for (Complex node : nodes) {
        weights.push_back(rng.uniform_box(-1.0, 1.0, -1.0, 1.0));
        terms.push_back(sub.section(node));
      }
      const EntireModel member = EntireModel::linear_combination(weights, terms);
      const double ambient_norm = std::sqrt(std::max(0.0, inner_product(sub.ambient(), member, member).real()));

      std::vector<Complex> b(nodes.size());
      for (std::size_t j = 0; j < nodes.size(); ++j) b[j] = weights[j] / std::conj(half_root_u(alpha, nodes[j]));
      Complex sq{};
      for (std::size_t j = 0; j < nodes.size(); ++j)
        for (std::size_t l = 0; l < nodes.size(); ++l) sq += b[j] * std::conj(b[l]) * (*k0)(nodes[j], nodes[l]);
      const double shifted_norm = std::sqrt(std::max(0.0, sq.real()));
      if (ambient_norm > 0.0) worst = std::max(worst, std::abs(shifted_norm - ambient_norm) / ambient_norm);
    }
    return worst;
  });

  try {
    rep.type_e0 = exponential_type(dec.e0);
  } catch (const EstimationError&) {
  }
  try {
    rep.type_ambient = exponential_type(sub.ambient().e());
  } catch (const EstimationError&) {
  }

  rep.verdicts["fg_identity"] = rep.fg.identity <= tol.identity;
  rep.verdicts["fg_real_equality"] = rep.fg.real_equality <= tol.identity;
  rep.verdicts["fg_margin_lower"] = rep.fg.margin_lower > tol.margin;
  rep.verdicts["fg_margin_upper"] = rep.fg.margin_upper > tol.margin;
  rep.verdicts["unimodularity"] = rep.unimodularity <= tol.unimodularity;
  rep.verdicts["exponent_fit"] = rep.exponent_fit <= tol.exponent_fit;
  rep.verdicts["kernel_roundtrip"] = rep.kernel_roundtrip <= tol.roundtrip;
  rep.verdicts["isometry"] = rep.isometry <= tol.isometry;
  if (rep.type_e0 && rep.type_ambient)
    rep.verdicts["type_bookkeeping"] = *rep.type_e0 <= *rep.type_ambient + std::abs(alpha) / 2.0 + 1e-6;
  return result;
}

nlohmann::json to_json(const StructureReport& report) {
  auto optional_number = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); };
  nlohmann::json verdicts = nlohmann::json::object();
  for (const auto& [name, ok] : report.verdicts) verdicts[name] = ok ? "pass" : "fail";
  return {{"alpha", report.alpha},
          {"phase_offset", report.phase_offset},
          {"residuals",
           {{"fg_identity", report.fg.identity},
            {"fg_real_equality", report.fg.real_equality},
            {"fg_margin_lower", report.fg.margin_lower},
            {"fg_margin_upper", report.fg.margin_upper},
            {"unimodularity", report.unimodularity},
            {"exponent_fit", report.exponent_fit},
            {"kernel_roundtrip", report.kernel_roundtrip},
            {"isometry", report.isometry}}},
          {"diagnostics", {{"type_e0", optional_number(report.type_e0)}, {"type_ambient", optional_number(report.type_ambient)}}},
          {"verdicts", std::move(verdicts)},
          {"passed", report.passed()},
          {"e0", {{"model", report.e0}}}};
}

}  // namespace debranges
