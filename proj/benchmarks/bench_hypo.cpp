#include <benchmark/benchmark.h>

#include "kineticflock/hypo/linear_mode.hpp"

using namespace kflock::hypo;

namespace {

void BM_EvolveMode(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LinearModeSystem s(0.5, n);
  Eigen::VectorXcd f0 = Eigen::VectorXcd::Zero(n);
  f0[0] = 1.0;
  const auto method = state.range(1) == 0 ? EvolveMethod::Expm : EvolveMethod::Ode;
  for (auto _ : state) benchmark::DoNotOptimize(evolve_mode(s, f0, 10.0, method));
}
BENCHMARK(BM_EvolveMode)->Args({24, 0})->Args({24, 1})->Args({64, 0});

void BM_Generator(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(LinearModeSystem(0.5, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Generator)->Arg(24)->Arg(64);

}  // namespace
