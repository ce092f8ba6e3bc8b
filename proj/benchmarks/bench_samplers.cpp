#include <benchmark/benchmark.h>

#include "forestlab/forest.hpp"
#include "forestlab/oracles.hpp"
#include "forestlab/walks.hpp"

using namespace forestlab;

namespace {

void BM_WilsonTorus(benchmark::State& state) {
  const Graph g = build_torus(2, static_cast<int>(state.range(0)));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(wilson_ust(g, 0, rng));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.vertex_count()));
}
BENCHMARK(BM_WilsonTorus)->Arg(8)->Arg(16)->Arg(32);

void BM_AldousBroderTorus(benchmark::State& state) {
  const Graph g = build_torus(2, static_cast<int>(state.range(0)));
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(oracles::aldous_broder_ust(g, rng));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.vertex_count()));
}
BENCHMARK(BM_AldousBroderTorus)->Arg(8)->Arg(16);

void BM_WiredUsfBox(benchmark::State& state) {
  const Graph g = build_box(2, static_cast<int>(state.range(0)));
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(wusf_window(g, rng));
}
BENCHMARK(BM_WiredUsfBox)->Arg(16)->Arg(64);

void BM_KruskalTorus(benchmark::State& state) {
  const Graph g = build_torus(2, static_cast<int>(state.range(0)));
  Rng rng(4);
  const EdgeLabels labels = sample_labels(g, rng);
  for (auto _ : state) benchmark::DoNotOptimize(free_msf(g, labels));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.edge_count()));
}
BENCHMARK(BM_KruskalTorus)->Arg(16)->Arg(64);

void BM_ZValue(benchmark::State& state) {
  const Graph g = build_torus(2, static_cast<int>(state.range(0)));
  Rng rng(5);
  const EdgeLabels labels = sample_labels(g, rng);
  EdgeId e = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(z_value(g, labels, e));
    e = (e + 1) % g.edge_count();
  }
}
BENCHMARK(BM_ZValue)->Arg(8)->Arg(32);

void BM_DelayedWalk(benchmark::State& state) {
  const Graph g = build_torus(2, 32);
  Rng rng(6);
  const ForestConfig tree = wilson_ust(g, 0, rng);
  const auto steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(delayed_srw(g, tree, 0, steps, steps, rng));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 2);
}
BENCHMARK(BM_DelayedWalk)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
