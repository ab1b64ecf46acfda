// Microbenchmarks for the hot paths: polynomial products, rational
// composition, jet extraction, the group action, normalization, and
// classification. Not part of the test suite; run the binary directly.

#include <benchmark/benchmark.h>

#include "hqmaps/algebra.hpp"
#include "hqmaps/catalog.hpp"
#include "hqmaps/isotropies.hpp"
#include "hqmaps/normalization.hpp"
#include "hqmaps/rng.hpp"

namespace {

using namespace hq;

GammaParams bench_gamma() {
  Rng rng(7);
  return sample_gamma(rng);
}

GammaPrimeParams bench_gamma_prime(Signature eps) {
  Rng rng(8);
  return sample_gamma_prime(rng, eps);
}

void BM_PolyMultiply(benchmark::State& state) {
  const RationalMapGerm H = normal_form_map({3, 0.7, -1});
  const CPoly2& a = H.comp[0].num;
  const CPoly2& b = H.comp[2].den;
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_PolyMultiply);

void BM_RationalCompose(benchmark::State& state) {
  const RationalMapGerm H = normal_form_map({2, 0.5, 1});
  const RationalMapGerm sigma = sigma_map(bench_gamma());
  for (auto _ : state) benchmark::DoNotOptimize(rational_compose(H, sigma));
}
BENCHMARK(BM_RationalCompose);

void BM_JetCoordinates(benchmark::State& state) {
  const RationalMapGerm H = normal_form_map({3, 1.0, 1});
  for (auto _ : state) benchmark::DoNotOptimize(jet_coordinates(H));
}
BENCHMARK(BM_JetCoordinates);

void BM_GroupAction(benchmark::State& state) {
  const Signature eps = -1;
  const RationalMapGerm H = normal_form_map({2, 0.5, eps});
  const GammaParams g = bench_gamma();
  const GammaPrimeParams gp = bench_gamma_prime(eps);
  for (auto _ : state) benchmark::DoNotOptimize(act(g, gp, H, eps));
}
BENCHMARK(BM_GroupAction);

void BM_NormalizeMoved(benchmark::State& state) {
  const Signature eps = 1;
  const RationalMapGerm moved =
      act(bench_gamma(), bench_gamma_prime(eps), normal_form_map({2, 0.5, eps}),
          eps);
  for (auto _ : state) benchmark::DoNotOptimize(normalize(moved, eps));
}
BENCHMARK(BM_NormalizeMoved)->Unit(benchmark::kMillisecond);

void BM_ClassifyMoved(benchmark::State& state) {
  const Signature eps = -1;
  const RationalMapGerm moved =
      act(bench_gamma(), bench_gamma_prime(eps), normal_form_map({3, 0.4, eps}),
          eps);
  for (auto _ : state) benchmark::DoNotOptimize(classify(moved, eps));
}
BENCHMARK(BM_ClassifyMoved)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
