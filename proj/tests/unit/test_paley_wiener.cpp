#include <doctest.h>

#include "debranges/grids.hpp"
#include "debranges/json_io.hpp"
#include "debranges/paley_wiener.hpp"
#include "oracles.hpp"

using namespace debranges;

namespace {

BandSubspaceSpec random_band(Rng& rng, double a) {
  double c = rng.uniform(-a, a);
  double d = rng.uniform(-a, a);
  if (c > d) std::swap(c, d);
  if (d - c < 0.2 * a) {
    const double mid = std::clamp(0.5 * (c + d), -0.85 * a, 0.85 * a);
    c = mid - 0.1 * a;
    d = mid + 0.1 * a;
  }
  return {a, c, d};
}

}  // namespace

TEST_CASE("Paley-Wiener spaces") {
  CHECK(pw_space(1.0).kernel(0.0, 0.0).real() == doctest::Approx(1.0 / oracle::pi));
  CHECK(std::abs(pw_space(oracle::pi).kernel(0.0, 1.0)) < 1e-15);
  CHECK_THROWS_AS(pw_space(0.0), DomainError);
  CHECK_THROWS_AS(pw_space(-1.0), DomainError);
  REQUIRE(pw_space(2.5).paley_wiener_type());
  CHECK(*pw_space(2.5).paley_wiener_type() == 2.5);
}

TEST_CASE("band kernels") {
  Rng rng(1);
  const auto full = band_subspace({1.5, -1.5, 1.5});
  const DeBrangesSpace pw = pw_space(1.5);
  for (int k = 0; k < 50; ++k) {
    const Complex l = rng.uniform_box(-4.0, 4.0, -1.0, 1.0);
    const Complex z = rng.uniform_box(-4.0, 4.0, -1.0, 1.0);
    CHECK(std::abs(subspace_kernel(full, l, z) - pw.kernel(l, z)) <= 1e-14 * (1.0 + std::abs(pw.kernel(l, z))));
  }

  const auto band = band_subspace({4.0, -1.0, 3.0});
  CHECK(std::abs(subspace_kernel(band, 0.0, 0.0) - 2.0 / oracle::pi) < 1e-14);
  for (int k = 0; k < 20; ++k) {
    const Complex l = rng.uniform_box(-3.0, 3.0, -1.0, 1.0);
    const Complex z = rng.uniform_box(-3.0, 3.0, -1.0, 1.0);
    const Complex quad = oracle::band_kernel_by_quadrature(-1.0, 3.0, l, z);
    CHECK(std::abs(subspace_kernel(band, l, z) - quad) <= 1e-10 * (1.0 + std::abs(quad)));
  }

  const BandKernel kernel(-1.0, 3.0);
  const auto reflected = kernel.reflected();
  const Complex l{0.4, 0.3};
  const Complex z{-0.9, 0.2};
  CHECK(std::abs((*reflected)(l, z) - oracle::band_kernel(-3.0, 1.0, l, z)) < 1e-14);
}

TEST_CASE("band specifications are validated") {
  CHECK_THROWS_AS(band_subspace({1.0, 0.5, 0.5}), DomainError);
  CHECK_THROWS_AS(band_subspace({1.0, 0.5, -0.5}), DomainError);
  CHECK_THROWS_AS(band_subspace({1.0, -1.5, 0.5}), DomainError);
  CHECK_THROWS_AS(band_subspace({-1.0, -0.5, 0.5}), DomainError);
  CHECK_NOTHROW(BandSubspaceSpec{2.0, -2.0, 2.0}.validate());
}

TEST_CASE("band nodes are nested") {
  const auto small = band_nodes(2.0, 8);
  const auto large = band_nodes(2.0, 16);
  for (Complex node : small) CHECK(std::find(large.begin(), large.end(), node) != large.end());
  CHECK(small.front() == Complex{-3.5 * 0.25, 0.0});
}

TEST_CASE("interval recovery examples") {
  const auto band = recover_interval(band_subspace({4.0, -1.0, 3.0}), 4.0);
  CHECK(std::abs(band.alpha + 2.0) <= 1e-6);
  CHECK(std::abs(band.shift + 1.0) <= 1e-6);
  CHECK(std::abs(band.midpoint - 1.0) <= 1e-6);
  CHECK(std::abs(band.half_length - 2.0) <= 1e-6);
  CHECK(std::abs(band.lo + 1.0) <= 1e-6);
  CHECK(std::abs(band.hi - 3.0) <= 1e-6);
  CHECK(std::abs(band.alpha - 2.0 * band.shift) <= 1e-12);

  for (double a : {1.0, 2.5}) {
    const auto full = recover_interval(band_subspace({a, -a, a}), a);
    CHECK(std::abs(full.alpha) <= 1e-9);
    CHECK(std::abs(full.lo + a) <= 1e-6);
    CHECK(std::abs(full.hi - a) <= 1e-6);
  }

  const auto right = recover_interval(band_subspace({2.0, 0.0, 2.0}), 2.0);
  CHECK(std::abs(right.alpha + 2.0) <= 1e-6);
  CHECK(std::abs(right.lo) <= 1e-6);
  CHECK(std::abs(right.hi - 2.0) <= 1e-6);
}

TEST_CASE("interval round trip on random bands") {
  Rng rng(77);
  for (double a : {1.0, 2.0, 4.0})
    for (int k = 0; k < 20; ++k) {
      const auto spec = random_band(rng, a);
      const auto got = recover_interval(band_subspace(spec, 0), a);
      CHECK(std::abs(got.lo - spec.c) <= 1e-6);
      CHECK(std::abs(got.hi - spec.d) <= 1e-6);
      CHECK(got.lo >= -a - 1e-6);
      CHECK(got.hi <= a + 1e-6);
    }
}

TEST_CASE("shift covariance") {
  Rng rng(5);
  for (int k = 0; k < 5; ++k) {
    const double beta = rng.uniform(-0.8, 0.8);
    const BandSubspaceSpec spec{1.0, -0.6, 0.4};
    const auto base = band_subspace(spec);
    const double a = 1.0 + std::abs(beta);
    const double before = verify_structure(base).report.alpha;
    const auto moved = verify_structure(shifted_subspace(base, beta, pw_space(a))).report;
    CHECK(moved.passed());
    CHECK(std::abs(moved.alpha - (before - 2.0 * beta)) <= 1e-8);
  }
}

TEST_CASE("ordering examples") {
  const auto probes1 = ordering_probe_nodes(2.0);
  CHECK(probes1.size() == 16);

  const auto narrow = band_subspace({2.0, -1.0, 1.0});
  const auto wide = band_subspace({2.0, -2.0, 2.0});
  CHECK(ordering_check(narrow, wide, probes1).verdict == Containment::inner_in_outer);

  const auto probes4 = ordering_probe_nodes(4.0);
  const auto big = band_subspace({4.0, -1.0, 3.0});
  const auto small = band_subspace({4.0, 0.0, 2.0});
  CHECK(ordering_check(big, small, probes4).verdict == Containment::outer_in_inner);

  const auto left = band_subspace({2.0, -1.0, 1.0});
  const auto right = band_subspace({2.0, 0.0, 2.0});
  CHECK(ordering_check(left, right, probes1).verdict == Containment::incomparable);
  CHECK(std::string(to_string(Containment::incomparable)) == "incomparable");
}

TEST_CASE("ordering agrees with interval containment") {
  Rng rng(50);
  const double a = 2.0;
  const auto probes = ordering_probe_nodes(a);
  for (int k = 0; k < 50; ++k) {
    const auto p = random_band(rng, a);
    const auto q = random_band(rng, a);
    const bool p_in_q = q.c <= p.c && p.d <= q.d;
    const bool q_in_p = p.c <= q.c && q.d <= p.d;
    const auto verdict = ordering_check(band_subspace(p, 0), band_subspace(q, 0), probes).verdict;
    if (p_in_q)
      CHECK(verdict == Containment::inner_in_outer);
    else if (q_in_p)
      CHECK(verdict == Containment::outer_in_inner);
    else
      CHECK(verdict == Containment::incomparable);
  }
}

TEST_CASE("ordering dichotomy on recovered types") {
  const BandSubspaceSpec spec{3.0, -0.5, 1.5};
  const auto rec = recover_interval(band_subspace(spec), spec.a);
  const double c0 = rec.half_length;
  const auto centered = shifted_subspace(band_subspace(spec), rec.shift, pw_space(spec.a + std::abs(rec.shift)));
  for (double c : {0.5 * (c0 + spec.a), c0 + 0.9 * (spec.a - c0)}) {
    const auto pw = band_subspace({spec.a + std::abs(rec.shift), -c, c});
    CHECK(ordering_check(centered, pw, ordering_probe_nodes(spec.a)).verdict == Containment::inner_in_outer);
  }
  for (double c : {0.5 * c0, 0.9 * c0}) {
    const auto pw = band_subspace({spec.a + std::abs(rec.shift), -c, c});
    CHECK(ordering_check(centered, pw, ordering_probe_nodes(spec.a)).verdict == Containment::outer_in_inner);
  }
}

TEST_CASE("recovery rejects failing structure") {
  std::vector<EntireModel> spans;
  const DeBrangesSpace pw1 = pw_space(1.0);
  for (Complex node : band_nodes(1.0, 4)) spans.push_back(pw1.section(node));
  const auto coarse = SubspaceModel::from_spans(pw1, spans);
  CHECK_THROWS_AS(recover_interval(coarse, 1.0), Error);
}

TEST_CASE("JSON of Paley-Wiener objects") {
  const auto rec = recover_interval(band_subspace({2.0, 0.0, 2.0}), 2.0);
  const auto j = to_json(rec);
  CHECK(j.contains("alpha"));
  CHECK(j.at("interval").size() == 2);
  CHECK(to_json(BandSubspaceSpec{2.0, 0.0, 2.0}).at("a") == 2.0);

  const BandKernel kernel(-1.0, 3.0, pw_space(4.0).kernel_ptr());
  const auto back = kernel_from_json(kernel_to_json(kernel));
  const Complex l{0.3, 0.1};
  const Complex z{1.2, -0.4};
  CHECK(std::abs((*back)(l, z) - kernel(l, z)) < 1e-15);
}
