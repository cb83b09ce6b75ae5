#include <benchmark/benchmark.h>

#include "urysohn/algebra_roots.hpp"
#include "urysohn/metric_roots.hpp"
#include "urysohn/random.hpp"
#include "urysohn/rohlin.hpp"
#include "urysohn/serialize.hpp"
#include "urysohn/verify.hpp"

namespace {

using namespace urysohn;

void BM_DyadicAmalgam(benchmark::State& state) {
  const auto parts_count = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  Rng rng(1);
  const auto base = labelled_algebra(2, "a");
  std::vector<SubalgebraInclusion> parts;
  for (std::size_t i = 0; i < parts_count; ++i) {
    std::vector<std::size_t> block_map;
    for (std::size_t b = 0; b < (std::size_t{1} << k); ++b) block_map.push_back(b % 2);
    rng.shuffle(block_map);
    parts.emplace_back(base, labelled_algebra(block_map.size(), "b" + std::to_string(i) + "_"), block_map);
  }
  for (auto _ : state) benchmark::DoNotOptimize(free_amalgam_algebra(base, parts));
  state.counters["atoms"] = static_cast<double>(free_amalgam_algebra(base, parts).result.size());
}
BENCHMARK(BM_DyadicAmalgam)->Args({2, 4})->Args({3, 4})->Args({4, 4})->Args({4, 5})->Unit(benchmark::kMillisecond);

void BM_MetricAmalgam(benchmark::State& state) {
  Rng rng(2);
  const auto base = random_metric_space(4, rng);
  std::vector<IsometricEmbedding> parts;
  for (int i = 0; i < state.range(0); ++i) {
    auto part = base;
    for (int c = 0; c < 6; ++c) part = one_point_extension(part, "c" + std::to_string(c), random_katetov(part, rng));
    parts.push_back(IsometricEmbedding::by_label(base, part));
  }
  for (auto _ : state) benchmark::DoNotOptimize(free_amalgam_metric(base, parts));
}
BENCHMARK(BM_MetricAmalgam)->Arg(2)->Arg(4)->Arg(8);

void BM_AlgebraRoot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  const auto base = refine_algebra(labelled_algebra(4), 4);
  const AlgebraAutomorphism g(base.sub, random_permutation(4, rng));
  const auto f = random_extension(base, power(g, static_cast<std::int64_t>(n)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(nth_root_extension_algebra(base, g, f, n));
}
BENCHMARK(BM_AlgebraRoot)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_IsometryRoot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  const auto f = random_isometry(5, rng);
  auto g = power(f, static_cast<std::int64_t>(n));
  for (int i = 0; i < 3; ++i) g = orbit_closure_extension(g, "u" + std::to_string(i), random_katetov(g.space, rng)).extended;
  const auto base = IsometricEmbedding::by_label(f.space, g.space);
  for (auto _ : state) benchmark::DoNotOptimize(nth_root_extension_isometry(base, f, g, n));
}
BENCHMARK(BM_IsometryRoot)->DenseRange(2, 5);

void BM_Suspension(benchmark::State& state) {
  const auto s = static_cast<std::size_t>(state.range(0));
  Rng rng(5);
  const auto k = random_isometry(5, rng);
  std::vector<std::size_t> domain(k.space.size()), h;
  for (std::size_t a = 0; a < domain.size(); ++a) {
    domain[a] = a;
    h.push_back(k.perm(a));
  }
  const auto sep = delta_separate(k.space, domain, h, k.space.diameter());
  for (auto _ : state) benchmark::DoNotOptimize(circular_suspension(sep, s));
  state.counters["points"] = static_cast<double>(domain.size() * s);
}
BENCHMARK(BM_Suspension)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_VerifyRootTower(benchmark::State& state) {
  const auto blob = certificate_json(build_root_tower_algebra(static_cast<std::size_t>(state.range(0)), 1));
  for (auto _ : state) benchmark::DoNotOptimize(verify_certificate(blob));
}
BENCHMARK(BM_VerifyRootTower)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_VerifyMetricTower(benchmark::State& state) {
  const auto blob = certificate_json(build_pair_tower_isometry(2, static_cast<std::size_t>(state.range(0)), 1));
  for (auto _ : state) benchmark::DoNotOptimize(verify_certificate(blob));
}
BENCHMARK(BM_VerifyMetricTower)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
