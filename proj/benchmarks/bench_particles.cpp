#include <benchmark/benchmark.h>

#include "kineticflock/particles/ensemble.hpp"

using namespace kflock::particles;

namespace {

ParticleEnsemble ensemble(int n) { return sample_shifted_maxwellian(n, 6.283185307179586, {{1, 0.1, 0.0}}, {}, 3); }

void BM_DriftDirect(benchmark::State& state) {
  const ParticleEnsemble e = ensemble(static_cast<int>(state.range(0)));
  ModelSpec m;
  m.epsilon = 0.25;
  for (auto _ : state) benchmark::DoNotOptimize(drift_direct(e, m));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DriftDirect)->RangeMultiplier(4)->Range(256, 4096)->Complexity(benchmark::oNSquared);

void BM_DriftMesh(benchmark::State& state) {
  const ParticleEnsemble e = ensemble(static_cast<int>(state.range(0)));
  ModelSpec m;
  m.epsilon = 0.25;
  for (auto _ : state) benchmark::DoNotOptimize(drift_mesh(e, m, 2048));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DriftMesh)->RangeMultiplier(8)->Range(1 << 10, 1 << 17)->Complexity(benchmark::oN);

void BM_StepEM(benchmark::State& state) {
  ParticleEnsemble e = ensemble(100000);
  ModelSpec m;
  m.epsilon = 0.25;
  m.mesh_threshold = 2000;
  for (auto _ : state) step_em(e, m, 0.01);
}
BENCHMARK(BM_StepEM);

}  // namespace
