#include <doctest.h>

#include "debranges/spectral.hpp"
#include "oracles.hpp"

using namespace debranges;

namespace {

const Complex I{0.0, 1.0};

SpectralDensity pw_section(double a, Complex lambda) {
  return SpectralDensity::exponential(-a, a, 1.0 / (2.0 * oracle::pi), -I * std::conj(lambda));
}

}  // namespace

TEST_CASE("transform of a kernel-section density is the sinc kernel") {
  for (Complex lambda : {Complex{0.0, 0.0}, Complex{0.3, 0.5}, Complex{-1.0, -0.7}})
    for (Complex z : {Complex{0.2, 0.0}, Complex{1.5, -0.5}, Complex{-2.0, 1.0}})
      CHECK(std::abs(pw_section(2.0, lambda).transform(z) - oracle::sinc_kernel(2.0, lambda, z)) < 1e-13);
}

TEST_CASE("shifting multiplies by an exponential") {
  const SpectralDensity d = pw_section(1.0, {0.2, 0.3});
  const Complex z{0.7, -0.4};
  CHECK(std::abs(d.shifted(0.75).transform(z) - std::exp(I * 0.75 * z) * d.transform(z)) < 1e-13);
}

TEST_CASE("division by a zero") {
  const SpectralDensity f = pw_section(oracle::pi, 0.0);
  const SpectralDensity g = f.divided(1.0);
  for (Complex z : {Complex{0.3, 0.0}, Complex{2.5, 0.5}, Complex{-1.0, -1.0}})
    CHECK(std::abs(g.transform(z) - f.transform(z) / (z - 1.0)) < 1e-12);
  CHECK(std::abs(g.transform(1.0) - (-1.0)) < 1e-12);
}

TEST_CASE("Plancherel norm of a kernel section") {
  const Complex lambda{0.0, 1.0};
  CHECK(spectral_inner(pw_section(1.0, lambda), pw_section(1.0, lambda)).real() ==
        doctest::Approx(std::sinh(2.0) / (2.0 * oracle::pi)).epsilon(1e-13));
}

TEST_CASE("power-exponential integrals") {
  const Complex s{0.3, 2.0};
  const Complex exact = (std::exp(s * 2.0) * (2.0 / s - 1.0 / (s * s)) - std::exp(-s) * (-1.0 / s - 1.0 / (s * s)));
  CHECK(std::abs(integrate_power_exponential(1, s, -1.0, 2.0) - exact) < 1e-13);
  CHECK(std::abs(integrate_power_exponential(0, 0.0, -1.0, 3.0) - 4.0) < 1e-14);
}

TEST_CASE("restriction and arithmetic") {
  const SpectralDensity d = pw_section(2.0, {0.1, 0.2});
  const SpectralDensity r = d.restricted(-1.0, 0.5);
  CHECK(r.support_lo() == -1.0);
  CHECK(r.support_hi() == 0.5);
  CHECK(spectral_norm(d - d) == 0.0);
  CHECK(spectral_norm(r + (d - r)) == doctest::Approx(spectral_norm(d)).epsilon(1e-13));
}
