#include <benchmark/benchmark.h>

#include <vector>

#include "debranges/grids.hpp"
#include "debranges/near_invariance.hpp"
#include "debranges/paley_wiener.hpp"

using namespace debranges;

static void BM_PaleyWienerKernel(benchmark::State& state) {
  const DeBrangesSpace pw = pw_space(4.0);
  Rng rng(1);
  const auto points = random_box(rng, 256, -5.0, 5.0, -1.0, 1.0);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pw.kernel(points[k % 256], points[(k + 7) % 256]));
    ++k;
  }
}
BENCHMARK(BM_PaleyWienerKernel);

static void BM_ProjectedKernel(benchmark::State& state) {
  const auto rank = static_cast<int>(state.range(0));
  const auto sub = band_approximation({4.0, -1.0, 3.0}, rank);
  Rng rng(2);
  const auto points = random_box(rng, 64, -3.0, 3.0, -1.0, 1.0);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(subspace_kernel(sub, points[k % 64], points[(k + 5) % 64]));
    ++k;
  }
}
BENCHMARK(BM_ProjectedKernel)->RangeMultiplier(2)->Range(8, 64);

static void BM_GramPseudoInverse(benchmark::State& state) {
  const auto rank = static_cast<int>(state.range(0));
  const DeBrangesSpace pw = pw_space(2.0);
  std::vector<EntireModel> spans;
  for (Complex node : band_nodes(2.0, rank)) spans.push_back(pw.section(node));
  for (auto _ : state) benchmark::DoNotOptimize(pseudo_inverse(gram_matrix(pw, spans)));
}
BENCHMARK(BM_GramPseudoInverse)->RangeMultiplier(2)->Range(8, 64);

static void BM_NearInvarianceResidual(benchmark::State& state) {
  const auto sub = band_subspace({4.0, -1.0, 3.0});
  for (auto _ : state) benchmark::DoNotOptimize(near_invariance_residual(sub, {0.3, 0.0}));
}
BENCHMARK(BM_NearInvarianceResidual);

static void BM_VerifyStructure(benchmark::State& state) {
  const auto sub = band_subspace({4.0, -1.0, 3.0});
  for (auto _ : state) benchmark::DoNotOptimize(verify_structure(sub));
  state.SetLabel("band (-1,3) in PW_4");
}
BENCHMARK(BM_VerifyStructure)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
