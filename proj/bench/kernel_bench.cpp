// SPDX-License-Identifier: Apache-2.0
//
// OpenMP kernels against their serial references, plus full vs masked planning.

#include <benchmark/benchmark.h>

#include <map>

#include "tnav/dataset.hpp"
#include "tnav/encoding.hpp"
#include "tnav/region.hpp"
#include "tnav/terrain.hpp"

namespace {

using tnav::Cell;

const tnav::Dem& dem(int size) {
  static std::map<int, tnav::Dem> cache;
  auto it = cache.find(size);
  if (it == cache.end()) it = cache.emplace(size, tnav::synth_terrain(1, size, 1.0)).first;
  return it->second;
}

tnav::GridPath diagonal(int size) {
  tnav::GridPath p;
  for (int k = 0; k < size; ++k) p.cells.push_back(Cell(k, k));
  return p;
}

void BM_CostMap(benchmark::State& state) {
  const tnav::Dem& d = dem(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tnav::compute_cost_map(d));
}
void BM_CostMapSerial(benchmark::State& state) {
  const tnav::Dem& d = dem(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tnav::serial::compute_cost_map(d));
}

void BM_Encode(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(tnav::gaussian_encode(n, n, Cell(n / 3, n / 2)));
}
void BM_EncodeSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(tnav::serial::gaussian_encode(n, n, Cell(n / 3, n / 2)));
}

void BM_OracleRegion(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const tnav::GridPath p = diagonal(n);
  for (auto _ : state) benchmark::DoNotOptimize(tnav::oracle_region(p, n, n, 3, 1.0));
}
void BM_OracleRegionSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const tnav::GridPath p = diagonal(n);
  for (auto _ : state) benchmark::DoNotOptimize(tnav::serial::oracle_region(p, n, n, 3, 1.0));
}

void BM_Rescale(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto prob = tnav::oracle_region(diagonal(n), n, n, 3, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(tnav::rescale_region(prob, n / 2, n / 2));
}
void BM_RescaleSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto prob = tnav::oracle_region(diagonal(n), n, n, 3, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(tnav::serial::rescale_region(prob, n / 2, n / 2));
}

tnav::DatasetSpec dataset_spec() {
  tnav::DatasetSpec spec;
  spec.count = 16;
  spec.size = 64;
  spec.seed = 5;
  return spec;
}
void BM_Dataset(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(tnav::generate_dataset(dataset_spec()));
}
void BM_DatasetSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(tnav::serial::generate_dataset(dataset_spec()));
}

void BM_PlanFull(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto cost = tnav::compute_cost_map(dem(n));
  const tnav::PlannerConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(tnav::astar_plan(cost, Cell(n / 10, n / 2), Cell(9 * n / 10, n / 2), cfg));
}
void BM_PlanMasked(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto cost = tnav::compute_cost_map(dem(n));
  const tnav::PlannerConfig cfg;
  const Cell s(n / 10, n / 2), g(9 * n / 10, n / 2);
  const auto full = tnav::astar_plan(cost, s, g, cfg);
  if (!full.ok()) {
    state.SkipWithError("no path");
    return;
  }
  const auto prob = tnav::oracle_region(full.path, n, n, 3, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(tnav::region_plan(cost, prob, s, g, cfg));
}

}  // namespace

BENCHMARK(BM_CostMap)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CostMapSerial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Encode)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EncodeSerial)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_OracleRegion)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleRegionSerial)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Rescale)->Arg(512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RescaleSerial)->Arg(512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Dataset)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DatasetSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PlanFull)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PlanMasked)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
