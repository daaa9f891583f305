#include <doctest.h>

#include <cmath>
#include <limits>

#include "debranges/entire_model.hpp"
#include "debranges/grids.hpp"
#include "debranges/json_io.hpp"
#include "debranges/paley_wiener.hpp"
#include "oracles.hpp"

using namespace debranges;

namespace {

const Complex I{0.0, 1.0};

EntireModel sin_model(double a) {
  return EntireModel::linear_combination({1.0 / (2.0 * I), -1.0 / (2.0 * I)},
                                         {EntireModel::exponential(a), EntireModel::exponential(-a)});
}

std::vector<EntireModel> model_zoo() {
  const DeBrangesSpace pw = pw_space(1.5);
  const auto band = band_subspace({2.0, -0.5, 1.7}, 0);
  return {
      EntireModel::exponential(0.7),
      EntireModel::polynomial({{1.0, 2.0}, {-0.5, 0.25}, {0.0, 1.0}}),
      pw.section({0.3, -0.4}),
      band.section({-0.2, 0.6}),
      EntireModel::linear_combination({{1.0, -1.0}, {0.5, 0.0}}, {pw.section(0.2), EntireModel::exponential(-0.3)}),
      EntireModel::product({EntireModel::polynomial({{0.0, 0.5}, 1.0}), band.section({1.0, 0.2})}),
      EntireModel::zero_divided(sin_model(2.0), 0.0),
      EntireModel::zero_divided(
          EntireModel::product({EntireModel::polynomial({-Complex{0.4, 0.3}, 1.0}), pw.section(0.1)}), {0.4, 0.3}),
  };
}

}  // namespace

TEST_CASE("evaluation of exponential and divided models") {
  CHECK(std::abs(EntireModel::exponential(1.0)(0.0) - 1.0) < 1e-15);
  CHECK(std::abs(EntireModel::exponential(-1.0)(I) - std::exp(1.0)) < 1e-14);
  CHECK(std::abs(EntireModel::zero_divided(sin_model(2.0), 0.0)(0.0) - 2.0) < 1e-10);
  CHECK_THROWS_AS(EntireModel::exponential(1.0)(Complex{std::numeric_limits<double>::infinity(), 0.0}), DomainError);
  CHECK_THROWS_AS(EntireModel::exponential(1.0)(Complex{0.0, std::nan("")}), DomainError);
}

TEST_CASE("star involution") {
  CHECK(std::abs(EntireModel::exponential(-1.0).star()(I) - std::exp(-1.0)) < 1e-15);
  CHECK(EntireModel::exponential(-1.0).star().as_exponential().rate == 1.0);
  CHECK(std::abs(EntireModel::polynomial({I, 1.0}).star()(I)) < 1e-15);

  Rng rng(11);
  for (const auto& m : model_zoo()) {
    CHECK(model_to_json(m.star().star()) == model_to_json(m));
    for (int k = 0; k < 100; ++k) {
      const Complex z = rng.uniform_disk(4.0);
      const Complex lhs = m.star()(z);
      const Complex rhs = std::conj(m(std::conj(z)));
      CHECK(std::abs(lhs - rhs) <= 1e-13 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("divided models reproduce the numerator") {
  const DeBrangesSpace pw = pw_space(std::numbers::pi);
  const Complex mu{1.0, 0.0};
  const EntireModel f = pw.section(0.0);
  const EntireModel g = EntireModel::zero_divided(f, mu);
  const double scale = std::max({std::abs(f(mu + 1.0)), std::abs(f(mu - 1.0)), std::abs(f(mu + I)), std::abs(f(mu - I))});
  for (double r : {1e-8, 3e-7, 1e-6, 5e-6, 1e-4, 0.01, 0.3, 1.0, 4.0, 10.0})
    for (double angle : {0.0, 1.0, 2.5, 4.0}) {
      const Complex z = mu + std::polar(r, angle);
      CHECK(std::abs(g(z) * (z - mu) - f(z)) <= 1e-10 * (std::abs(f(z)) + scale));
    }
}

TEST_CASE("exponentials are unimodular on the real line") {
  Rng rng(3);
  for (int k = 0; k < 100; ++k) {
    const double a = rng.uniform(-10.0, 10.0);
    const double x = rng.uniform(-50.0, 50.0);
    CHECK(std::abs(std::abs(EntireModel::exponential(a)(x)) - 1.0) <= 1e-14);
  }
}

TEST_CASE("Hermite-Biehler check") {
  const std::vector<Complex> grid{I, {1.0, 1.0}, {0.0, 2.0}};
  const auto pw = hermite_biehler_check(EntireModel::exponential(-1.0), grid);
  CHECK(pw.passed);
  CHECK(pw.worst_margin > 0.0);
  CHECK(hermite_biehler_check(EntireModel::polynomial({I, 1.0}), std::vector<Complex>{I}).passed);
  const auto bad = hermite_biehler_check(EntireModel::polynomial({-I, 1.0}), std::vector<Complex>{I});
  CHECK_FALSE(bad.passed);
  CHECK(bad.worst_margin == doctest::Approx(-2.0));
  CHECK_THROWS_AS(hermite_biehler_check(EntireModel::exponential(-1.0), std::vector<Complex>{}), PreconditionError);
  CHECK_THROWS_AS(hermite_biehler_check(EntireModel::exponential(-1.0), std::vector<Complex>{1.0}), PreconditionError);
}

TEST_CASE("Taylor jets") {
  const auto jet = taylor_jet(EntireModel::exponential(2.0), 0.5);
  Complex factorial = 1.0;
  for (int k = 0; k <= kJetOrder; ++k) {
    if (k) factorial *= static_cast<double>(k);
    const Complex expected = std::pow(2.0 * I, k) * std::exp(I * 1.0) / factorial;
    CHECK(std::abs(jet[static_cast<std::size_t>(k)] - expected) < 1e-13);
  }
  const auto pjet = taylor_jet(EntireModel::polynomial({1.0, 2.0, 3.0}), 1.0);
  CHECK(std::abs(pjet[0] - 6.0) < 1e-14);
  CHECK(std::abs(pjet[1] - 8.0) < 1e-14);
  CHECK(std::abs(pjet[2] - 3.0) < 1e-14);

  const DeBrangesSpace pw = pw_space(1.0);
  const EntireModel s = pw.section(0.0);
  const auto sjet = taylor_jet(s, 0.7);
  const Complex d1 = oracle::derivative([&](Complex z) { return s(z); }, 0.7);
  CHECK(std::abs(sjet[1] - d1) < 1e-8);
}

TEST_CASE("models survive a JSON round trip") {
  Rng rng(5);
  for (const auto& m : model_zoo()) {
    const EntireModel back = model_from_json(model_to_json(m));
    for (int k = 0; k < 10; ++k) {
      const Complex z = rng.uniform_disk(3.0);
      CHECK(std::abs(back(z) - m(z)) <= 1e-14 * std::max(1.0, std::abs(m(z))));
    }
  }
  CHECK(complex_to_json({1.5, -2.0}) == nlohmann::json::array({1.5, -2.0}));
  CHECK_THROWS_AS(model_from_json({{"variant", "gamma"}}), ConfigError);
}
