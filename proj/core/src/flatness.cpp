#include "wkam/flatness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "multi_index.hpp"
#include "wkam/finite_difference.hpp"

namespace wkam {

int max_flatness_order(const PeriodicGrid& grid) { return std::min(6, grid.n() / 4); }

namespace {

FlatnessReport flatness_impl(const ScalarField& U, std::span<const std::size_t> at, int s_max,
                             std::span<const char> region) {
  const PeriodicGrid& g = U.grid();
  const int d = g.dim();
  if (s_max < 0) throw std::invalid_argument("s_max must be non-negative");
  if (s_max > max_flatness_order(g))
    throw std::invalid_argument("stencil overflow: s_max=" + std::to_string(s_max) + " exceeds min(6, n/4)=" +
                                std::to_string(max_flatness_order(g)));
  const double h = g.spacing();
  double umax = 0;
  for (double v : U.values()) umax = std::max(umax, std::abs(v));

  FlatnessReport rep;
  rep.s_max = s_max;
  rep.tolerance.assign(s_max + 2, 0.0);
  for (int k = 1; k <= s_max + 1; ++k) {
    double M = 0;
    for (const Coord& a : detail::multi_indices(d, k + 2))
      for (std::size_t x = 0; x < g.size(); ++x)
        if (region.empty() || region[x]) M = std::max(M, std::abs(fd_derivative(U, x, a)));
    double mass = 0;
    for (const Coord& a : detail::multi_indices(d, k)) mass = std::max(mass, fd_weight_mass(a, d));
    double floor = 64 * std::numeric_limits<double>::epsilon() * umax * mass * std::pow(h, -k);
    rep.tolerance[k] = h * h * M + floor;
  }
  for (std::size_t x : at) {
    if (x >= g.size()) throw std::invalid_argument("flatness node out of range");
    int s = 0;
    bool exceeded = false;
    for (int k = 1; k <= s_max + 1 && !exceeded; ++k) {
      for (const Coord& a : detail::multi_indices(d, k))
        if (std::abs(fd_derivative(U, x, a)) > rep.tolerance[k]) exceeded = true;
      if (!exceeded && k <= s_max) s = k;
    }
    rep.nodes.push_back(x);
    rep.order.push_back(s);
    rep.next_exceeds.push_back(exceeded);
  }
  return rep;
}

}  // namespace

FlatnessReport flatness_order(const ScalarField& U, std::span<const std::size_t> at, int s_max) {
  return flatness_impl(U, at, s_max, {});
}

FlatnessReport flatness_order(const ScalarField& U, std::span<const std::size_t> at, int s_max,
                              std::span<const char> region) {
  if (region.size() != U.grid().size()) throw std::invalid_argument("flatness region size does not match the grid");
  return flatness_impl(U, at, s_max, region);
}

}  // namespace wkam
