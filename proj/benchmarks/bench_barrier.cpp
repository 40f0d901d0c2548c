#include <benchmark/benchmark.h>

#include "wkam/barrier.hpp"
#include "wkam/critical_value.hpp"
#include "wkam/minplus.hpp"
#include "wkam/potential.hpp"

using namespace wkam;

namespace {

LagrangianModel two_well(int n) { return mechanical_model(sample_potential(TwoWellPotential{}, build_grid(2, n))); }

void BM_ManePotentialAllRows(benchmark::State& state) {
  LagrangianModel m = two_well(static_cast<int>(state.range(0)));
  ActionGraph G = build_action_graph(m, critical_value_closed_form(m).alpha, StencilKind::standard);
  for (auto _ : state) benchmark::DoNotOptimize(mane_potential(G));
}
BENCHMARK(BM_ManePotentialAllRows)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_PeierlsDiagonal(benchmark::State& state) {
  LagrangianModel m = two_well(static_cast<int>(state.range(0)));
  ActionGraph G = build_action_graph(m, 0.0, StencilKind::extended);
  auto crit = critical_nodes(G);
  for (auto _ : state) benchmark::DoNotOptimize(peierls_diagonal(G, crit));
}
BENCHMARK(BM_PeierlsDiagonal)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_RatioCycle(benchmark::State& state) {
  PeriodicGrid g = build_grid(2, static_cast<int>(state.range(0)));
  LagrangianModel m = make_model(ModelKind::linear_drift, sample_potential(TwoWellPotential{}, g),
                                 closed_form({0.7, 0.2}, ScalarField(g)));
  for (auto _ : state) benchmark::DoNotOptimize(critical_value_ratio_cycle(m));
}
BENCHMARK(BM_RatioCycle)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_MinPlusLiminf(benchmark::State& state) {
  LagrangianModel m = two_well(static_cast<int>(state.range(0)));
  ActionGraph G = build_action_graph(m, 0.0, StencilKind::standard);
  for (auto _ : state) benchmark::DoNotOptimize(minplus_power_liminf(G, std::size_t{1} << 20));
}
BENCHMARK(BM_MinPlusLiminf)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
