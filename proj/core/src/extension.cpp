#include "wkam/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

#include "wkam/error.hpp"
#include "wkam/finite_difference.hpp"

namespace wkam {
namespace {

std::size_t nearest_node(const PeriodicGrid& g, const Point& p) {
  Coord c{0, 0, 0};
  for (int a = 0; a < g.dim(); ++a) c[a] = g.wrap(static_cast<int>(std::llround(p[a] * g.n())));
  return g.index(c);
}

Point delta(const Point& y, const Point& x, int d) {
  Point t{0, 0, 0};
  for (int a = 0; a < d; ++a) t[a] = periodic_delta(y[a], x[a]);
  return t;
}

double norm(const Point& t, int d) {
  double s = 0;
  for (int a = 0; a < d; ++a) s += t[a] * t[a];
  return std::sqrt(s);
}

}  // namespace

std::vector<Jet> composition_jets(const ScalarField& U, const PointMap& g, std::span<const Point> at, int s, int r) {
  const PeriodicGrid& grid = U.grid();
  const int d = grid.dim();
  const double h = grid.spacing();
  if (s < 0 || r <= s) throw std::invalid_argument("composition jets need 0 <= s < r");
  auto set = std::make_shared<const MultiIndexSet>(d, r);
  std::vector<std::vector<std::pair<int, double>>> stencils;
  for (int m = 0; m <= r; ++m) stencils.push_back(m == 0 ? std::vector<std::pair<int, double>>{{0, 1.0}} : central_stencil(m));

  std::vector<Jet> out;
  for (const Point& x : at) {
    Point gx = g(x);
    std::size_t z = nearest_node(grid, gx);
    Point zp = grid.position(z);
    Jet outer(set);
    for (std::size_t i = 0; i < set->size(); ++i)
      outer.coeffs()[i] = fd_derivative(U, z, (*set)[i]) / set->factorial(i);
    outer = outer.drop_below(s);

    std::vector<Jet> inner(d, Jet(set));
    for (std::size_t i = 0; i < set->size(); ++i) {
      const Coord& a = (*set)[i];
      Point acc{0, 0, 0};
      // Tensor product of the per-axis stencils.
      std::vector<std::pair<Point, double>> pts{{x, 1.0}};
      for (int ax = 0; ax < d; ++ax) {
        std::vector<std::pair<Point, double>> next;
        for (const auto& [p, w] : pts)
          for (const auto& [off, sw] : stencils[a[ax]]) {
            Point q = p;
            q[ax] += off * h;
            next.push_back({q, w * sw});
          }
        pts = std::move(next);
      }
      for (const auto& [p, w] : pts) {
        Point v = delta(g(p), zp, d);
        for (int c = 0; c < d; ++c) acc[c] += w * v[c];
      }
      double scale = std::pow(h, set->order(i)) * set->factorial(i);
      for (int c = 0; c < d; ++c) inner[c].coeffs()[i] = acc[c] / scale;
    }
    out.push_back(compose(outer, inner));
  }
  return out;
}

ExtensionField rough_composition_extend(const ScalarField& U, const PointMap& g, const PartitionOfUnity& pou, int s,
                                        int r, const std::vector<Jet>* jets, double jet_tolerance) {
  const WhitneyDecomposition& dec = pou.decomposition();
  const PeriodicGrid& grid = U.grid();
  const int d = grid.dim();
  if (!(grid == dec.grid)) throw std::invalid_argument("potential and decomposition use different grids");
  if (s < 0 || r <= s) throw std::invalid_argument("extension needs 0 <= s < r");
  const std::vector<Point>& A = dec.anchors;

  std::vector<Jet> own;
  if (!jets) {
    own = composition_jets(U, g, A, s, r);
    jets = &own;
  }
  if (jets->size() != A.size()) throw std::invalid_argument("one jet per A* point is required");
  for (const Jet& j : *jets)
    if (j.set().dim() != d || j.set().degree() != r) throw std::invalid_argument("jets must have dimension d and degree r");

  double umax = 0;
  for (double v : U.values()) umax = std::max(umax, std::abs(v));
  auto Ug = [&](const Point& y) { return U.interpolate(g(y)); };
  for (std::size_t i = 0; i < A.size(); ++i)
    if (std::abs(Ug(A[i])) > 1e-9 * (1 + umax))
      throw NumericalInconsistency("g maps A* point " + std::to_string(i) + " outside the zero set of U");

  // Orders ≤ s are flat on A*, so only the higher coefficients are compared.
  // The scale is the median jet size, so a single wild jet cannot hide itself.
  std::vector<double> sizes;
  for (const Jet& J : *jets) {
    double m = 0;
    for (std::size_t k = 0; k < J.coeffs().size(); ++k)
      if (J.set().order(k) > s) m = std::max(m, std::abs(J.coeffs()[k]));
    sizes.push_back(m);
  }
  std::nth_element(sizes.begin(), sizes.begin() + sizes.size() / 2, sizes.end());
  const double scale = sizes[sizes.size() / 2];
  const double near = 2 * std::sqrt(static_cast<double>(d)) * grid.spacing() * (1 + 1e-9);
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = i + 1; j < A.size(); ++j) {
      Point t = delta(A[j], A[i], d);
      double dist = norm(t, d);
      if (dist > near) continue;
      const Jet& Jj = (*jets)[j];
      Jet moved = (*jets)[i].shift(t);
      double ratio = 0;
      for (std::size_t k = 0; k < moved.coeffs().size(); ++k) {
        int ord = Jj.set().order(k);
        if (ord <= s) continue;
        ratio = std::max(ratio, std::abs(moved.coeffs()[k] - Jj.coeffs()[k]) / std::pow(dist, r - ord));
      }
      if (ratio > jet_tolerance * (1 + scale))
        throw NumericalInconsistency("inconsistent jets at A* points " + std::to_string(i) + " and " +
                                     std::to_string(j) + ": remainder ratio " + std::to_string(ratio));
    }

  std::vector<std::size_t> nodes = dec.domain_nodes();
  std::vector<char> is_anchor(grid.size(), 0);
  for (std::size_t x : dec.anchor_nodes) is_anchor[x] = 1;

  auto P = [&](std::size_t j, const Point& y) { return (*jets)[j].evaluate(delta(y, A[j], d)); };
  double measured = 0;
  for (std::size_t y : nodes) {
    if (is_anchor[y]) continue;
    Point yp = grid.position(y);
    double uy = Ug(yp);
    for (std::size_t j = 0; j < A.size(); ++j) {
      double dist = torus_distance(yp, A[j], d);
      measured = std::max(measured, std::abs(uy - P(j, yp)) / std::pow(dist, r));
    }
  }

  ExtensionField ext{ScalarField(grid, 0.0), std::vector<char>(grid.size(), 0), *jets, 0, 0, 0, 0, false, false, false, false, {}};
  ext.C = std::max(2 * measured, std::numeric_limits<double>::min());
  for (std::size_t y : nodes) {
    ext.domain[y] = 1;
    if (is_anchor[y]) continue;
    Point yp = grid.position(y);
    double f = 0;
    for (auto [j, w] : pou.weights(yp)) {
      std::size_t a = dec.cubes[j].anchor;
      f += w * (P(a, yp) + 2 * ext.C * std::pow(torus_distance(yp, A[a], d), r));
    }
    ext.F[y] = f;
  }

  ext.min_off_anchors = std::numeric_limits<double>::infinity();
  bool nonneg = true;
  for (std::size_t y : nodes) {
    double f = ext.F[y];
    nonneg &= f >= 0;
    if (is_anchor[y]) {
      ext.max_on_anchors = std::max(ext.max_on_anchors, std::abs(f));
      continue;
    }
    ext.min_off_anchors = std::min(ext.min_off_anchors, f);
    double u = Ug(grid.position(y));
    if (f > 0) ext.K = std::max(ext.K, u / f);
    else if (u > 0) ext.K = std::numeric_limits<double>::infinity();
  }
  ext.nonnegative = nonneg;
  ext.vanishes_on_anchors = ext.max_on_anchors == 0;
  ext.zero_set_matches = ext.min_off_anchors > 0;
  ext.dominates = std::isfinite(ext.K);

  // Flatness of F at anchors whose stencils stay inside W₁.
  int smax = std::min(s, max_flatness_order(grid));
  int reach = stencil_radius(smax + 3);
  std::vector<std::size_t> interior;
  for (std::size_t x : dec.anchor_nodes) {
    Coord c = grid.coord(x);
    bool inside = true;
    for (int a = 0; a < d; ++a)
      inside &= c[a] - reach >= dec.domain.lo[a] && c[a] + reach <= dec.domain.lo[a] + dec.domain.side;
    if (inside) interior.push_back(x);
  }
  std::vector<char> region(grid.size(), 0);
  for (std::size_t y : nodes) {
    Coord c = grid.coord(y);
    bool inside = true;
    for (int a = 0; a < d; ++a)
      inside &= c[a] - reach >= dec.domain.lo[a] && c[a] + reach <= dec.domain.lo[a] + dec.domain.side;
    region[y] = inside;
  }
  ext.flatness = flatness_order(ext.F, interior, smax, region);
  return ext;
}

}  // namespace wkam
