#include <doctest.h>

#include "debranges/grids.hpp"
#include "debranges/paley_wiener.hpp"
#include "debranges/structure.hpp"
#include "oracles.hpp"

using namespace debranges;

namespace {

const Complex I{0.0, 1.0};

SubspaceModel full_pw1() {
  const DeBrangesSpace pw1 = pw_space(1.0);
  return SubspaceModel::from_kernel(pw1, pw1.kernel_ptr());
}

std::vector<USample> synthetic(double rate, double lo, double hi, double step) {
  std::vector<USample> out;
  const int n = static_cast<int>(std::lround((hi - lo) / step));
  for (int k = 0; k <= n; ++k) {
    const double x = lo + k * step;
    out.emplace_back(x, std::exp(I * rate * x));
  }
  return out;
}

}  // namespace

TEST_CASE("F and G of the full space") {
  const FGPair fg = extract_fg(full_pw1());
  const double norm = std::sqrt(oracle::pi * std::sinh(1.0));
  const Complex f0 = -I * std::sinh(0.5) / norm;
  CHECK(std::abs(fg.f(0.0) - f0) < 1e-14);
  CHECK(std::abs(fg.f(0.0) - Complex{0.0, -0.2711978}) < 1e-7);
  Rng rng(1);
  for (int k = 0; k < 20; ++k) {
    const Complex z = rng.uniform_disk(4.0);
    CHECK(std::abs(fg.f(z) - std::sin(z - 0.5 * I) / norm) <= 1e-13 * (1.0 + std::abs(fg.f(z))));
    CHECK(std::abs(fg.g(z) - std::sin(z + 0.5 * I) / norm) <= 1e-13 * (1.0 + std::abs(fg.g(z))));
  }
}

TEST_CASE("F of a band subspace") {
  const FGPair fg = extract_fg(band_subspace({4.0, -1.0, 3.0}));
  const Complex anchor = kAnchor;
  const double diag = oracle::band_kernel(-1.0, 3.0, anchor, anchor).real();
  const double c = 1.0 / std::sqrt(oracle::pi * std::exp(1.0) * std::sinh(2.0));
  Rng rng(2);
  for (int k = 0; k < 20; ++k) {
    const Complex z = rng.uniform_disk(3.0);
    const Complex direct = oracle::band_kernel(-1.0, 3.0, anchor, z) * (z - std::conj(anchor)) / std::sqrt(diag);
    const Complex closed = c * std::exp(I * (z - 0.5 * I)) * std::sin(2.0 * (z - 0.5 * I));
    CHECK(std::abs(direct - closed) <= 1e-13 * (1.0 + std::abs(closed)));
    CHECK(std::abs(fg.f(z) - direct) <= 1e-12 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("F/G identities") {
  const FGPair fg = extract_fg(full_pw1());
  Rng rng(3);
  const auto extra = random_disk(rng, 200, 5.0);
  const auto real = linspace(-4.0, 4.0, 101);
  const auto lower = random_box(rng, 50, -4.0, 4.0, -2.0, -0.1);
  const auto upper = random_box(rng, 50, -4.0, 4.0, 0.1, 2.0);
  const auto r = verify_fg_identities(fg.f, fg.g, real, lower, upper, extra);
  CHECK(r.identity <= 1e-10);
  CHECK(r.real_equality <= 1e-12);
  CHECK(r.margin_lower > 0.0);
  CHECK(r.margin_upper > 0.0);

  const std::vector<Complex> minus_i{-I};
  const std::vector<Complex> plus_i{I};
  const auto at_minus_i = verify_fg_identities(fg.f, fg.g, real, minus_i, plus_i);
  const double n = std::sqrt(oracle::pi * std::sinh(1.0));
  CHECK(at_minus_i.margin_lower == doctest::Approx((std::sinh(1.5) - std::sinh(0.5)) / n).epsilon(1e-12));

  const auto degenerate = verify_fg_identities(fg.f, fg.f, real, lower, upper, extra);
  CHECK(degenerate.identity == 0.0);
  CHECK(degenerate.margin_lower == 0.0);
  CHECK(degenerate.margin_upper == 0.0);
}

TEST_CASE("U is unimodular and exponential") {
  const FGPair full = extract_fg(full_pw1());
  CHECK(std::abs(compute_u(full.f, full.g, 0.37) - 1.0) < 1e-13);

  const FGPair band = extract_fg(band_subspace({4.0, -1.0, 3.0}));
  CHECK(std::abs(compute_u(band.f, band.g, 0.5) - std::exp(-I)) < 1e-13);

  Rng rng(4);
  for (int k = 0; k < 100; ++k) {
    const double x = rng.uniform(-6.0, 6.0);
    CHECK(std::abs(std::abs(compute_u(band.f, band.g, x)) - 1.0) <= 1e-8);
  }

  const EntireModel vanishing = EntireModel::polynomial({0.0, 1.0});
  CHECK_THROWS_AS(compute_u(vanishing, vanishing, 0.0), PoleIndicatorError);
}

TEST_CASE("exponent fitting") {
  const auto ones = synthetic(0.0, -3.0, 3.0, 0.25);
  const auto one_fit = fit_exponent(ones);
  CHECK(std::abs(one_fit.alpha) <= 1e-12);
  CHECK(one_fit.residual <= 1e-12);

  const auto down = fit_exponent(synthetic(-2.0, -3.0, 3.0, 0.25));
  CHECK(down.alpha == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(down.residual <= 1e-12);

  const auto up = fit_exponent(synthetic(3.0, -3.0, 3.0, 0.2), 3.0);
  CHECK(std::abs(up.alpha - 3.0) <= 1e-9);

  auto shifted = synthetic(1.5, -2.0, 2.0, 0.1);
  for (auto& s : shifted) s.second *= std::exp(I * 0.4);
  const auto offset_fit = fit_exponent(shifted);
  CHECK(std::abs(offset_fit.alpha - 1.5) <= 1e-9);
  CHECK(std::abs(offset_fit.offset - 0.4) <= 1e-9);

  auto loud = synthetic(1.0, -2.0, 2.0, 0.1);
  loud[5].second *= 1.01;
  CHECK_THROWS_AS(fit_exponent(loud), NotUnimodularError);

  CHECK_THROWS_AS(fit_exponent(synthetic(3.0, -3.0, 3.0, 0.2), 10.0), AliasingError);
  CHECK_THROWS_AS(fit_exponent(synthetic(0.95 * oracle::pi / 0.2, -3.0, 3.0, 0.2)), AliasingError);
  CHECK_THROWS_AS(fit_exponent(synthetic(1.0, 0.0, 0.5, 0.25)), PreconditionError);
}

TEST_CASE("assembling E0") {
  const FGPair full = extract_fg(full_pw1());
  const EntireModel e0 = assemble_e0(full.f, full.g, 0.0);
  const double n = std::sqrt(oracle::pi * std::sinh(1.0));
  Rng rng(5);
  for (int k = 0; k < 10; ++k) {
    const Complex z = rng.uniform_disk(3.0);
    const Complex expected = std::sqrt(2.0 * oracle::pi) * std::sin(z + 0.5 * I) / n;
    CHECK(std::abs(e0(z) - expected) <= 1e-13 * (1.0 + std::abs(expected)));
  }
  CHECK(std::abs(e0(I)) > std::abs(e0.star()(I)));

  const FGPair band = extract_fg(band_subspace({4.0, -1.0, 3.0}));
  const EntireModel band_e0 = assemble_e0(band.f, band.g, -2.0);
  CHECK(std::abs(exponential_type(band_e0) - 2.0) <= 1e-6);

  CHECK_THROWS_AS(assemble_e0(full.f, full.f, 0.0), ExtractionInconsistentError);
}

TEST_CASE("exponential type") {
  CHECK(exponential_type(EntireModel::exponential(-3.0)) == doctest::Approx(3.0));
  const EntireModel sin2 = EntireModel::linear_combination(
      {1.0 / (2.0 * I), -1.0 / (2.0 * I)}, {EntireModel::exponential(2.0), EntireModel::exponential(-2.0)});
  CHECK(std::abs(exponential_type(sin2) - 2.0) <= 1e-6);
  CHECK(exponential_type(EntireModel::constant(1.0)) == 0.0);
  CHECK(std::abs(exponential_type(pw_space(1.5).section({0.2, 0.1})) - 1.5) <= 1e-6);
}

TEST_CASE("structure of the full space") {
  const auto result = verify_structure(full_pw1());
  const auto& rep = result.report;
  CHECK(rep.passed());
  CHECK(std::abs(rep.alpha) <= 1e-9);
  CHECK(rep.kernel_roundtrip <= 1e-8);
  CHECK(rep.isometry <= 1e-8);
  CHECK(rep.fg.identity <= 1e-10);
  CHECK(rep.unimodularity <= 1e-8);
  REQUIRE(rep.type_e0);
  CHECK(std::abs(*rep.type_e0 - 1.0) <= 1e-6);
}

TEST_CASE("structure of band and shifted subspaces") {
  const auto band = verify_structure(band_subspace({4.0, -1.0, 3.0})).report;
  CHECK(band.passed());
  CHECK(std::abs(band.alpha + 2.0) <= 1e-6);
  CHECK(band.kernel_roundtrip <= 1e-8);

  const DeBrangesSpace pw1 = pw_space(1.0);
  const auto base = SubspaceModel::from_kernel(pw1, pw1.kernel_ptr());
  const auto shifted = verify_structure(shifted_subspace(base, 0.5, pw_space(2.0))).report;
  CHECK(shifted.passed());
  CHECK(std::abs(shifted.alpha + 1.0) <= 1e-6);
  CHECK(shifted.verdicts.at("type_bookkeeping"));

  const auto spans_only = verify_structure(band_approximation({2.0, -1.0, 1.0}, 48)).report;
  CHECK(std::abs(spans_only.alpha) <= 1e-4);
}

TEST_CASE("pipeline errors carry the failing stage") {
  const DeBrangesSpace pw1 = pw_space(1.0);
  const EntireModel through_anchor = EntireModel::linear_combination(
      {1.0, -pw1.kernel(1.0, kAnchor) / pw1.kernel(-1.0, kAnchor)}, {pw1.section(1.0), pw1.section(-1.0)});
  const auto vanishing = SubspaceModel::from_spans(pw1, {through_anchor});
  try {
    verify_structure(vanishing);
    FAIL("expected a common-zero error");
  } catch (const CommonZeroError& e) {
    CHECK(e.stage() == "common_zero_scan");
  }
}

TEST_CASE("structure report JSON") {
  const auto rep = verify_structure(band_subspace({2.0, 0.0, 2.0})).report;
  const auto j = to_json(rep);
  for (const char* key : {"alpha", "phase_offset", "residuals", "diagnostics", "verdicts", "passed", "e0"})
    CHECK(j.contains(key));
  CHECK(j.at("verdicts").at("kernel_roundtrip") == "pass");
  CHECK(j.at("passed") == true);
}

TEST_CASE("tolerance scaling") {
  const Tolerances t = Tolerances{}.scaled(10.0);
  CHECK(t.identity == doctest::Approx(1e-7));
  CHECK(t.roundtrip == doctest::Approx(1e-7));
}
