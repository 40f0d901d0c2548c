#include "wkam/cube_cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "intervals.hpp"
#include "wkam/flatness.hpp"

namespace wkam {

CubeCover image_measure_bound(const ScalarField& u, std::span<const char> A, int N) {
  const PeriodicGrid& g = u.grid();
  const int d = g.dim();
  const int n = g.n();
  if (N <= 0 || n % N != 0)
    throw std::invalid_argument("subdivision N=" + std::to_string(N) + " does not divide n=" + std::to_string(n));
  if (A.size() != g.size()) throw std::invalid_argument("mask size does not match the grid");
  const int m = n / N;
  std::size_t cubes = 1;
  for (int a = 0; a < d; ++a) cubes *= static_cast<std::size_t>(N);

  std::vector<char> meets(cubes, 0);
  bool any = false;
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (!A[x]) continue;
    any = true;
    Coord c = g.coord(x);
    std::size_t id = 0;
    for (int a = d - 1; a >= 0; --a) id = id * N + c[a] / m;
    meets[id] = 1;
  }
  if (!any) throw std::invalid_argument("image measure bound needs a nonempty set A");

  CubeCover cover;
  cover.subdivisions = N;
  std::vector<std::pair<double, double>> iv;
  for (std::size_t id = 0; id < cubes; ++id) {
    if (!meets[id]) continue;
    CoverCube cube;
    cube.edge_nodes = m;
    std::size_t rest = id;
    for (int a = 0; a < d; ++a) {
      cube.corner[a] = static_cast<int>(rest % N) * m;
      rest /= N;
    }
    cube.lo = std::numeric_limits<double>::infinity();
    cube.hi = -cube.lo;
    Coord off{0, 0, 0};
    int count = 1;
    for (int a = 0; a < d; ++a) count *= m + 1;
    for (int t = 0; t < count; ++t) {
      int r = t;
      for (int a = 0; a < d; ++a) {
        off[a] = cube.corner[a] + r % (m + 1);
        r /= m + 1;
      }
      double v = u[g.index(off)];
      cube.lo = std::min(cube.lo, v);
      cube.hi = std::max(cube.hi, v);
    }
    iv.push_back({cube.lo, cube.hi});
    cover.sum_of_widths += cube.hi - cube.lo;
    cover.cubes.push_back(cube);
  }
  cover.union_length = detail::union_length(std::move(iv));
  return cover;
}

ScalingSweep scaling_sweep(const ScalarField& u, const ScalarField& U, std::span<const char> A,
                           std::span<const int> ladder, int s_max) {
  if (ladder.size() < 4) throw std::invalid_argument("scaling sweep needs at least 4 rungs");
  ScalingSweep sw;
  sw.ladder.assign(ladder.begin(), ladder.end());
  for (int N : ladder) sw.bounds.push_back(image_measure_bound(u, A, N).union_length);

  std::vector<std::size_t> nodes;
  for (std::size_t x = 0; x < A.size(); ++x)
    if (A[x]) nodes.push_back(x);
  FlatnessReport fr = flatness_order(U, nodes, std::min(s_max, max_flatness_order(U.grid())));
  sw.flatness = *std::min_element(fr.order.begin(), fr.order.end());
  sw.predicted = U.grid().dim() - 0.5 * (sw.flatness + 2);

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < ladder.size(); ++i)
    if (sw.bounds[i] > 0) {
      lx.push_back(std::log(static_cast<double>(ladder[i])));
      ly.push_back(std::log(sw.bounds[i]));
    }
  if (lx.empty()) {
    sw.exact_zero = true;
    return sw;
  }
  if (lx.size() < 4) throw std::invalid_argument("fewer than 4 usable rungs in scaling sweep");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= lx.size();
  my /= lx.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  sw.slope = sxy / sxx;
  sw.within_tolerance = std::abs(*sw.slope - sw.predicted) <= 0.3;
  return sw;
}

}  // namespace wkam
