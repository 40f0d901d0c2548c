#include "wkam/fast_march.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

namespace wkam {

FastMarchResult fast_march_jacobi(const LagrangianModel& model, double alpha, std::size_t source) {
  if (model.kind == ModelKind::linear_drift || !model.eta.is_zero())
    throw std::invalid_argument("fast marching supports mechanical models only (eta must vanish)");
  const PeriodicGrid& g = model.grid();
  if (source >= g.size()) throw std::invalid_argument("fast marching source out of range");
  const int d = g.dim();
  const double h = g.spacing();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> phi(g.size(), kInf);
  std::vector<char> done(g.size(), 0);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  phi[source] = 0;
  heap.push({0.0, source});
  FastMarchResult out;

  auto update = [&](std::size_t y) {
    double speed = std::sqrt(2 * std::max(0.0, model.potential[y] + alpha));
    double a[kMaxDim];
    int m = 0;
    for (int ax = 0; ax < d; ++ax) {
      Coord e{0, 0, 0};
      e[ax] = 1;
      std::size_t p = g.shifted(y, e);
      e[ax] = -1;
      std::size_t q = g.shifted(y, e);
      double best = std::min(done[p] ? phi[p] : kInf, done[q] ? phi[q] : kInf);
      if (best < kInf) a[m++] = best;
    }
    std::sort(a, a + m);
    double rhs = speed * h;
    // Solve Σ (φ − a_i)² = rhs² over the largest upwind set that stays causal.
    double val = a[0] + rhs;
    for (int k = 2; k <= m; ++k) {
      if (val <= a[k - 1]) break;
      double s = 0, s2 = 0;
      for (int i = 0; i < k; ++i) {
        s += a[i];
        s2 += a[i] * a[i];
      }
      double disc = s * s - k * (s2 - rhs * rhs);
      if (disc < 0) break;
      val = (s + std::sqrt(disc)) / k;
    }
    if (val < phi[y]) {
      phi[y] = val;
      heap.push({val, y});
    }
  };

  while (!heap.empty()) {
    auto [v, x] = heap.top();
    heap.pop();
    if (done[x] || v > phi[x]) continue;
    done[x] = 1;
    out.accepted.push_back(x);
    for (int ax = 0; ax < d; ++ax)
      for (int sgn : {-1, 1}) {
        Coord e{0, 0, 0};
        e[ax] = sgn;
        std::size_t y = g.shifted(x, e);
        if (!done[y]) update(y);
      }
  }
  out.distance = ScalarField(g, std::move(phi));
  return out;
}

}  // namespace wkam
