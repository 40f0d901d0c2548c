#include <benchmark/benchmark.h>

#include <random>

#include "wkam/whitney.hpp"

using namespace wkam;

namespace {

std::vector<char> mask_for(const PeriodicGrid& g, const WhitneyDomain& dom, double density) {
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(density);
  std::vector<char> mask(g.size(), 0);
  for (std::size_t x = 0; x < g.size(); ++x) {
    Coord c = g.coord(x);
    if (c[0] >= dom.lo[0] && c[0] <= dom.lo[0] + dom.side && c[1] >= dom.lo[1] && c[1] <= dom.lo[1] + dom.side)
      mask[x] = coin(rng);
  }
  mask[g.index(dom.lo)] = 1;
  return mask;
}

void BM_WhitneyDecompose(benchmark::State& state) {
  PeriodicGrid g = build_grid(2, 64);
  WhitneyDomain dom{{16, 16, 0}, 32};
  auto mask = mask_for(g, dom, 0.02);
  int refine = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(whitney_decompose(g, dom, mask, 1, refine));
}
BENCHMARK(BM_WhitneyDecompose)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_PartitionWeights(benchmark::State& state) {
  PeriodicGrid g = build_grid(2, 64);
  WhitneyDomain dom{{16, 16, 0}, 32};
  auto dec = whitney_decompose(g, dom, mask_for(g, dom, 0.02));
  PartitionOfUnity pou(dec, 4);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.25, 0.75);
  for (auto _ : state) benchmark::DoNotOptimize(pou.weights(Point{u(rng), u(rng), 0}));
}
BENCHMARK(BM_PartitionWeights);

}  // namespace
