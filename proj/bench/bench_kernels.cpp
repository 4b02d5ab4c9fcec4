// Serial reference vs OpenMP kernels on growing point sets.
//
//   ./build/bench/bench_kernels --benchmark_counters_tabular=true

#include <benchmark/benchmark.h>

#include <vector>

#include "wgb/groups.hpp"
#include "wgb/kernels.hpp"

namespace {

std::vector<wgb::GroupElement> points(std::size_t n, std::uint64_t seed) {
  return wgb::haar_sample(wgb::descriptor(wgb::GroupId::su2()), seed, n);
}

wgb::Exec exec_of(const benchmark::State& s) {
  return s.range(1) ? wgb::Exec::parallel : wgb::Exec::serial;
}

void BM_CharacterEnergies(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto xs = points(n, 7);
  std::vector<double> c(n, 1.0 / n);
  for (std::size_t i = 1; i < n; i += 2) c[i] = -c[i];
  for (auto _ : state)
    benchmark::DoNotOptimize(wgb::quaternion_character_energies(xs, c, 50, exec_of(state)));
  state.counters["pairs"] = double(n) * n;
}

void BM_DistanceMatrix(benchmark::State& state) {
  const auto G = wgb::descriptor(wgb::GroupId::so3());
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto xs = points(n, 1), ys = points(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(wgb::distance_matrix(G, xs, ys, exec_of(state)));
}

void BM_NearestSites(benchmark::State& state) {
  const auto G = wgb::descriptor(wgb::GroupId::so3());
  const auto sites = points(static_cast<std::size_t>(state.range(0)), 3);
  const auto samples = points(20000, 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(wgb::nearest_sites(G, sites, samples, exec_of(state)));
}

void BM_TorusModes(benchmark::State& state) {
  const auto G = wgb::descriptor(wgb::GroupId::torus(2));
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto xs = wgb::haar_sample(G, 5, n);
  std::vector<double> c(n, 1.0 / n);
  std::vector<std::array<int, 3>> modes;
  for (int a = -20; a <= 20; ++a)
    for (int b = -20; b <= 20; ++b) modes.push_back({a, b, 0});
  for (auto _ : state)
    benchmark::DoNotOptimize(wgb::torus_mode_energies(2, xs, c, modes, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_CharacterEnergies)->ArgsProduct({{64, 256, 1024}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistanceMatrix)->ArgsProduct({{256, 1024}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NearestSites)->ArgsProduct({{64, 512}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TorusModes)->ArgsProduct({{256, 2048}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
