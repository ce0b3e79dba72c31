#include <benchmark/benchmark.h>

#include "kineticflock/kinetic/initial_data.hpp"
#include "kineticflock/kinetic/solver.hpp"

using namespace kflock::kinetic;

namespace {

SolverConfig config(int K, int N, TimeScheme scheme) {
  SolverConfig c;
  c.K = K;
  c.n_modes = N;
  c.scheme = scheme;
  c.initial.kind = InitialKind::Random;
  return c;
}

void BM_Rhs(benchmark::State& state) {
  const SolverConfig c = config(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), TimeScheme::ImexEuler);
  const Solver solver(c);
  const SpectralField f = make_initial_field(c.initial, c.K, c.n_modes, c.domain_length, c.sobolev_order, 1);
  for (auto _ : state) benchmark::DoNotOptimize(solver.rhs(f));
  state.SetItemsProcessed(state.iterations() * (2 * c.K + 1) * c.n_modes);
}
BENCHMARK(BM_Rhs)->Args({16, 32})->Args({64, 64})->Args({128, 64});

void BM_Step(benchmark::State& state) {
  const auto scheme = state.range(2) == 0 ? TimeScheme::ImexEuler : TimeScheme::Ars222;
  const SolverConfig c = config(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), scheme);
  const Solver solver(c);
  SpectralField f = make_initial_field(c.initial, c.K, c.n_modes, c.domain_length, c.sobolev_order, 1);
  for (auto _ : state) {
    f = solver.step(f, 5e-5);
    benchmark::DoNotOptimize(f.coeffs().data());
  }
}
BENCHMARK(BM_Step)->Args({64, 64, 0})->Args({64, 64, 1});

}  // namespace
