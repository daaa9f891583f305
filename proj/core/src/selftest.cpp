#include "debranges/selftest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "debranges/grids.hpp"
#include "debranges/near_invariance.hpp"
#include "debranges/paley_wiener.hpp"
#include "debranges/report.hpp"

namespace debranges {

namespace {

using nlohmann::json;

struct NamedSubspace {
  std::string name;
  SubspaceModel sub;
  double a;
  std::optional<std::pair<double, double>> interval;
};

// A band inside (-a, a) no shorter than a quarter of the ambient width.
BandSubspaceSpec random_band(Rng& rng, double a) {
  const double length = rng.uniform(0.25 * a, 1.75 * a);
  const double c = rng.uniform(-0.99 * a, 0.99 * a - length);
  return {a, c, c + length};
}

std::string band_name(const BandSubspaceSpec& s) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "band(%.6g,%.6g) in PW_%g", s.c, s.d, s.a);
  return buf;
}

std::vector<NamedSubspace> test_subspaces(std::uint64_t seed) {
  std::vector<NamedSubspace> out;
  const DeBrangesSpace pw1 = pw_space(1.0);
  out.push_back({"full PW_1", SubspaceModel::from_kernel(pw1, pw1.kernel_ptr()), 1.0, std::pair{-1.0, 1.0}});
  out.push_back({"band(-1,3) in PW_4", band_subspace({4.0, -1.0, 3.0}, 0), 4.0, std::pair{-1.0, 3.0}});
  out.push_back({"band(0,2) in PW_2", band_subspace({2.0, 0.0, 2.0}, 0), 2.0, std::pair{0.0, 2.0}});
  Rng rng(seed + 101);
  const std::array<double, 3> widths{1.0, 2.0, 4.0};
  for (int k = 0; k < 20; ++k) {
    const BandSubspaceSpec s = random_band(rng, widths[static_cast<std::size_t>(k % 3)]);
    out.push_back({band_name(s), band_subspace(s, 0), s.a, std::pair{s.c, s.d}});
  }
  return out;
}

json failure(const std::exception& e) { return {{"error", error_to_json(e)}}; }

CriterionResult reproducing_property(const SelftestOptions& o) {
  CriterionResult r;
  double worst = 0.0;
  json per_space = json::array();
  Rng rng(o.seed + 1);
  for (double a : {1.0, std::numbers::pi, 4.0}) {
    const DeBrangesSpace space = pw_space(a);
    std::vector<EntireModel> functions;
    for (int k = 0; k < 50; ++k) {
      std::vector<Complex> weights;
      std::vector<EntireModel> terms;
      const int n = 1 + static_cast<int>(rng.uniform() * 4.0);
      for (int t = 0; t < n; ++t) {
        weights.push_back(rng.uniform_box(-1.0, 1.0, -1.0, 1.0));
        terms.push_back(space.section(rng.uniform_box(-5.0, 5.0, -2.0, 2.0)));
      }
      functions.push_back(EntireModel::linear_combination(std::move(weights), std::move(terms)));
    }
    const auto nodes = random_box(rng, 50, -5.0, 5.0, -2.0, 2.0);
    double space_worst = 0.0;
    for (const auto& f : functions)
      for (Complex lambda : nodes) {
        const Complex direct = f(lambda);
        const Complex inner = inner_product(space, f, space.section(lambda), InnerProductRoute::spectral);
        space_worst = std::max(space_worst, std::abs(inner - direct) / (1.0 + std::abs(direct)));
      }
    per_space.push_back({{"a", a}, {"max_scaled_error", space_worst}});
    worst = std::max(worst, space_worst);
  }
  r.passed = worst <= 1e-10 * o.tol_scale;
  r.details = {{"spaces", std::move(per_space)}, {"max_scaled_error", worst}, {"tolerance", 1e-10 * o.tol_scale}};
  return r;
}

CriterionResult fg_identities(const SelftestOptions& o) {
  CriterionResult r;
  r.passed = true;
  json rows = json::array();
  for (const auto& s : test_subspaces(o.seed)) {
    Rng rng(o.seed + 2);
    const auto disk = random_disk(rng, 200, 5.0);
    const auto upper = random_box(rng, 50, -5.0, 5.0, 0.05, 3.0);
    std::vector<Complex> lower;
    for (Complex z : random_box(rng, 50, -5.0, 5.0, 0.05, 3.0)) lower.push_back(std::conj(z));
    const auto real = exponent_grid(2.0 * s.a);
    const FGPair fg = extract_fg(s.sub);
    const FGResiduals res = verify_fg_identities(fg.f, fg.g, real, lower, upper, disk);
    const bool ok = res.identity <= 1e-10 * o.tol_scale && res.margin_lower > 0.0 && res.margin_upper > 0.0;
    r.passed = r.passed && ok;
    rows.push_back({{"subspace", s.name},
                    {"identity", res.identity},
                    {"margin_lower", res.margin_lower},
                    {"margin_upper", res.margin_upper},
                    {"passed", ok}});
  }
  r.details = {{"subspaces", std::move(rows)}};
  return r;
}

CriterionResult exponent_recovery(const SelftestOptions& o) {
  CriterionResult r;
  r.passed = true;
  json rows = json::array();
  for (const auto& s : test_subspaces(o.seed)) {
    const FGPair fg = extract_fg(s.sub);
    Rng rng(o.seed + 3);
    double unimodular = 0.0;
    for (int k = 0; k < 100; ++k)
      unimodular = std::max(unimodular, std::abs(std::abs(compute_u(fg.f, fg.g, rng.uniform(-10.0, 10.0))) - 1.0));
    std::vector<USample> samples;
    for (double x : exponent_grid(2.0 * s.a)) samples.emplace_back(x, compute_u(fg.f, fg.g, x));
    const ExponentFit fit = fit_exponent(samples, 2.0 * s.a);
    const double expected = -(s.interval->first + s.interval->second);
    const double alpha_tol = (s.name == "full PW_1" ? 1e-9 : 1e-6) * o.tol_scale;
    const bool ok = unimodular <= 1e-8 * o.tol_scale && fit.residual <= 1e-8 * o.tol_scale &&
                    std::abs(fit.alpha - expected) <= alpha_tol;
    r.passed = r.passed && ok;
    rows.push_back({{"subspace", s.name},
                    {"unimodularity", unimodular},
                    {"fit_residual", fit.residual},
                    {"alpha", fit.alpha},
                    {"expected_alpha", expected},
                    {"passed", ok}});
  }
  r.details = {{"subspaces", std::move(rows)}};
  return r;
}

CriterionResult round_trip(const SelftestOptions& o) {
  CriterionResult r;
  r.passed = true;
  json rows = json::array();
  auto subs = test_subspaces(o.seed);
  const DeBrangesSpace pw1 = pw_space(1.0);
  subs.push_back({"e^{iz/2} PW_1 in PW_2",
                  shifted_subspace(SubspaceModel::from_kernel(pw1, pw1.kernel_ptr()), 0.5, pw_space(2.0)), 2.0,
                  std::pair{-0.5, 1.5}});
  StructureOptions options;
  options.seed = o.seed + 4;
  for (const auto& s : subs) {
    const StructureResult res = verify_structure(s.sub, options);
    const bool ok = res.report.kernel_roundtrip <= 1e-8 * o.tol_scale && res.report.isometry <= 1e-8 * o.tol_scale;
    r.passed = r.passed && ok;
    rows.push_back({{"subspace", s.name},
                    {"kernel_roundtrip", res.report.kernel_roundtrip},
                    {"isometry", res.report.isometry},
                    {"alpha", res.report.alpha},
                    {"passed", ok}});
  }
  r.details = {{"subspaces", std::move(rows)}};
  return r;
}

CriterionResult interval_recovery(const SelftestOptions& o) {
  CriterionResult r;
  r.passed = true;
  double worst = 0.0;
  int dichotomy_checks = 0;
  int dichotomy_failures = 0;
  json failures = json::array();
  Rng rng(o.seed + 5);
  StructureOptions options;
  options.seed = o.seed + 5;
  for (double a : {1.0, 2.0, 4.0}) {
    for (int k = 0; k < 20; ++k) {
      const BandSubspaceSpec spec = random_band(rng, a);
      const SubspaceModel band = band_subspace(spec, 0);
      const RecoveredInterval iv = recover_interval(band, a, options);
      const double err = std::max(std::abs(iv.lo - spec.c), std::abs(iv.hi - spec.d));
      worst = std::max(worst, err);
      if (err > 1e-6 * o.tol_scale) {
        r.passed = false;
        failures.push_back({{"band", band_name(spec)}, {"recovered", {iv.lo, iv.hi}}});
      }

      const double b = iv.shift;
      const double c0 = iv.half_length;
      const double outer_a = a + std::abs(b);
      const DeBrangesSpace wide = pw_space(outer_a);
      const SubspaceModel centred = shifted_subspace(band, b, wide);
      const auto probes = ordering_probe_nodes(outer_a);
      auto pw_band = [&](double c) { return band_subspace({outer_a, -c, c}, 0); };
      if (c0 < a) {
        const double above = 0.5 * (c0 + a);
        ++dichotomy_checks;
        if (ordering_check(centred, pw_band(above), probes).verdict != Containment::inner_in_outer) {
          ++dichotomy_failures;
          failures.push_back({{"band", band_name(spec)}, {"probe", above}, {"expected", "inner_in_outer"}});
        }
      }
      const double below = 0.5 * c0;
      ++dichotomy_checks;
      if (ordering_check(pw_band(below), centred, probes).verdict != Containment::inner_in_outer) {
        ++dichotomy_failures;
        failures.push_back({{"band", band_name(spec)}, {"probe", below}, {"expected", "inner_in_outer"}});
      }
    }
  }
  r.passed = r.passed && dichotomy_failures == 0;
  r.details = {{"bands", 60},
               {"max_endpoint_error", worst},
               {"dichotomy_checks", dichotomy_checks},
               {"dichotomy_failures", dichotomy_failures},
               {"failures", std::move(failures)}};
  return r;
}

CriterionResult negative_controls(const SelftestOptions& o) {
  CriterionResult r;
  json d;
  const DeBrangesSpace pw1 = pw_space(1.0);

  bool pinned_ok = false;
  const SubspaceModel pinned =
      SubspaceModel::from_kernel(pw1, std::make_shared<const PinnedKernel>(pw1.kernel_ptr(), Complex{}));
  try {
    verify_structure(pinned);
  } catch (const CommonZeroError& e) {
    const auto& pts = e.points();
    pinned_ok = std::any_of(pts.begin(), pts.end(), [](Complex z) { return std::abs(z) < 1e-14; });
    d["zero_pinned"] = error_to_json(e);
  }
  d["zero_pinned_rejected"] = pinned_ok;

  const FGPair fg = extract_fg(SubspaceModel::from_kernel(pw1, pw1.kernel_ptr()));
  Rng rng(o.seed + 6);
  const auto upper = random_box(rng, 50, -5.0, 5.0, 0.05, 3.0);
  std::vector<Complex> lower;
  for (Complex z : upper) lower.push_back(std::conj(z));
  const FGResiduals degenerate = verify_fg_identities(fg.f, fg.f, exponent_grid(2.0), lower, upper);
  const Tolerances tol = Tolerances{}.scaled(o.tol_scale);
  const bool margins_fail = !(degenerate.margin_lower > tol.margin) && !(degenerate.margin_upper > tol.margin);
  bool e0_rejected = false;
  try {
    assemble_e0(fg.f, fg.f, 0.0);
  } catch (const ExtractionInconsistentError&) {
    e0_rejected = true;
  }
  d["degenerate_margins"] = {degenerate.margin_lower, degenerate.margin_upper};
  d["degenerate_margins_fail"] = margins_fail;
  d["degenerate_e0_rejected"] = e0_rejected;

  bool non_hb_rejected = false;
  try {
    DeBrangesSpace bad(EntireModel::polynomial({Complex{0.0, -1.0}, 1.0}));
  } catch (const DomainError&) {
    non_hb_rejected = true;
  }
  d["non_hermite_biehler_rejected"] = non_hb_rejected;

  r.passed = pinned_ok && margins_fail && e0_rejected && non_hb_rejected;
  r.details = std::move(d);
  return r;
}

CriterionResult rank_convergence(const SelftestOptions& o) {
  CriterionResult r;
  r.passed = true;
  json rows = json::array();
  for (const BandSubspaceSpec& spec : {BandSubspaceSpec{4.0, -1.0, 3.0}, BandSubspaceSpec{2.0, 0.0, 2.0}}) {
    const SubspaceModel exact = band_subspace(spec, 0);
    const Kernel& k = *exact.kernel();
    const double reach = 10.0 / (0.5 * (spec.d - spec.c));
    Rng rng(o.seed + 7);
    const auto ls = random_box(rng, 20, -reach, reach, -1.0, 1.0);
    const auto zs = random_box(rng, 20, -reach, reach, -1.0, 1.0);
    json gaps = json::array();
    double previous = std::numeric_limits<double>::infinity();
    bool monotone = true;
    double gap32 = 0.0;
    for (int rank : {8, 16, 32, 64}) {
      const SubspaceModel approx = band_approximation(spec, rank);
      const Kernel& p = *approx.kernel();
      double gap = 0.0;
      for (std::size_t j = 0; j < ls.size(); ++j) {
        const double scale = std::sqrt(k(ls[j], ls[j]).real() * k(zs[j], zs[j]).real());
        gap = std::max(gap, std::abs(k(ls[j], zs[j]) - p(ls[j], zs[j])) / scale);
      }
      monotone = monotone && gap < previous;
      previous = gap;
      if (rank == 32) gap32 = gap;
      gaps.push_back({{"rank", rank}, {"relative_gap", gap}});
    }
    const bool ok = monotone && gap32 <= 1e-3 * o.tol_scale;
    r.passed = r.passed && ok;
    rows.push_back({{"band", band_name(spec)}, {"gaps", std::move(gaps)}, {"monotone", monotone}, {"passed", ok}});
  }
  r.details = {{"bands", std::move(rows)}};
  return r;
}

json criteria_json(const SelftestOptions& o, int last) {
  json out = json::array();
  for (int id = 1; id <= last; ++id) {
    const CriterionResult c = run_criterion(id, o);
    out.push_back({{"id", c.id}, {"name", c.name}, {"passed", c.passed}, {"details", c.details}});
  }
  return out;
}

CriterionResult determinism(const SelftestOptions& o) {
  CriterionResult r;
  const std::string first = criteria_json(o, kCriterionCount - 1).dump();
  const std::string second = criteria_json(o, kCriterionCount - 1).dump();
  r.passed = first == second;
  r.details = {{"bytes", first.size()}, {"identical", r.passed}};
  return r;
}

}  // namespace

const std::string& criterion_name(int id) {
  static const std::array<std::string, kCriterionCount> names{
      "reproducing property",      "F/G identities",   "unimodular U and exponent fit", "kernel round trip and isometry",
      "interval recovery",         "negative controls", "rank convergence",             "determinism"};
  if (id < 1 || id > kCriterionCount) throw PreconditionError("criterion id out of range");
  return names[static_cast<std::size_t>(id - 1)];
}

CriterionResult run_criterion(int id, const SelftestOptions& options) {
  CriterionResult r;
  try {
    switch (id) {
      case 1: r = reproducing_property(options); break;
      case 2: r = fg_identities(options); break;
      case 3: r = exponent_recovery(options); break;
      case 4: r = round_trip(options); break;
      case 5: r = interval_recovery(options); break;
      case 6: r = negative_controls(options); break;
      case 7: r = rank_convergence(options); break;
      case 8: r = determinism(options); break;
      default: throw PreconditionError("criterion id out of range");
    }
  } catch (const PreconditionError& e) {
    if (id < 1 || id > kCriterionCount) throw;
    r.passed = false;
    r.details = failure(e);
  } catch (const std::exception& e) {
    r.passed = false;
    r.details = failure(e);
  }
  r.id = id;
  r.name = criterion_name(id);
  return r;
}

json selftest_report(const SelftestOptions& options) {
  json criteria = criteria_json(options, kCriterionCount);
  const bool all = std::all_of(criteria.begin(), criteria.end(), [](const json& c) { return c.at("passed").get<bool>(); });
  return {{"schema", "debranges.selftest/1"},
          {"seed", options.seed},
          {"tol_scale", options.tol_scale},
          {"criteria", std::move(criteria)},
          {"passed", all}};
}

}  // namespace debranges
