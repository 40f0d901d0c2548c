#pragma once

// Independent reference computations for the tests. Nothing here calls the
// graph solvers of the library; only the graph/model builders are shared.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wkam/action_graph.hpp"
#include "wkam/error.hpp"
#include "wkam/model.hpp"
#include "wkam/potential.hpp"

namespace oracle {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Dense {
  std::size_t n = 0;
  std::vector<double> a;
  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
};

inline Dense one_step(const wkam::ActionGraph& g) {
  Dense m{g.node_count(), std::vector<double>(g.node_count() * g.node_count(), kInf)};
  for (std::size_t x = 0; x < m.n; ++x) {
    m(x, x) = std::min(m(x, x), g.stationary[x]);
    for (std::size_t s = 0; s < g.degree(); ++s) m(x, g.target(x, s)) = std::min(m(x, g.target(x, s)), g.weight(x, s));
  }
  return m;
}

// Floyd–Warshall closure: minimal cost over nontrivial paths. The diagonal
// keeps the cheapest closed walk (stationary loop included).
inline Dense floyd_warshall(const wkam::ActionGraph& g) {
  Dense d = one_step(g);
  for (std::size_t k = 0; k < d.n; ++k)
    for (std::size_t i = 0; i < d.n; ++i) {
      double dik = d(i, k);
      if (dik == kInf) continue;
      for (std::size_t j = 0; j < d.n; ++j) d(i, j) = std::min(d(i, j), dik + d(k, j));
    }
  return d;
}

// h(x,y) = min over nodes z with a zero-cost closed walk of Φ(x,z)+Φ(z,y),
// with Φ(z,z) read as 0 at the junction.
inline Dense peierls_fw(const wkam::ActionGraph& g, double tol = 1e-10) {
  Dense phi = floyd_warshall(g);
  std::vector<std::size_t> crit;
  for (std::size_t z = 0; z < phi.n; ++z)
    if (phi(z, z) <= tol) crit.push_back(z);
  Dense h{phi.n, std::vector<double>(phi.n * phi.n, kInf)};
  for (std::size_t x = 0; x < phi.n; ++x)
    for (std::size_t y = 0; y < phi.n; ++y)
      for (std::size_t z : crit) {
        double a = x == z ? 0.0 : phi(x, z);
        double b = z == y ? 0.0 : phi(z, y);
        h(x, y) = std::min(h(x, y), a + b);
      }
  return h;
}

// Smallest level with no negative closed walk, by bisection on Floyd–Warshall.
inline double critical_level_fw(const wkam::LagrangianModel& m, wkam::StencilKind st, double lo, double hi,
                                double tol = 1e-12) {
  // Infeasible: some edge radicand is negative, a stationary loop has
  // negative cost, or Floyd–Warshall finds a negative cycle.
  auto feasible = [&](double k) {
    wkam::ActionGraph G;
    try {
      G = wkam::build_action_graph(m, k, st);
    } catch (const wkam::NumericalInconsistency&) {
      return false;
    }
    for (double s : G.stationary)
      if (s < -1e-14) return false;
    Dense d = floyd_warshall(G);
    for (std::size_t i = 0; i < d.n; ++i)
      if (d(i, i) < -1e-14) return false;
    return true;
  };
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

// n-th derivative of f∘g at a point from the derivatives of f (at g(t)) and
// g (at t), summing over all set partitions of {1..n}.
inline double faa_di_bruno(const std::vector<double>& f, const std::vector<double>& g, int n) {
  double total = 0;
  std::vector<int> block(n, 0);
  std::function<void(int, int)> rec = [&](int i, int blocks) {
    if (i == n) {
      std::vector<int> size(blocks, 0);
      for (int b : block) ++size[b];
      double term = f[blocks];
      for (int s : size) term *= g[s];
      total += term;
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      block[i] = b;
      rec(i + 1, std::max(blocks, b + 1));
    }
  };
  if (n == 0) return f[0];
  rec(0, 0);
  return total;
}

// Random trigonometric potential with a few low modes.
inline wkam::TrigPotential random_trig(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0), phase(0.0, 6.283185307179586);
  std::uniform_int_distribution<int> mode(-2, 2), terms(1, 3);
  wkam::TrigPotential p;
  p.offset = 1.0;
  int t = terms(rng);
  for (int i = 0; i < t; ++i) {
    wkam::TrigTerm term;
    term.amplitude = 0.5 * amp(rng);
    for (int a = 0; a < d; ++a) term.wavevector[a] = mode(rng);
    if (d == 1 || std::all_of(term.wavevector.begin(), term.wavevector.begin() + d, [](int k) { return k == 0; }))
      term.wavevector[0] = 1;
    term.phase = phase(rng);
    p.terms.push_back(term);
  }
  return p;
}

struct Instance {
  wkam::LagrangianModel model;
  wkam::StencilKind stencil;
};

// Mechanical instance with d ∈ {1, 2}, 4 ≤ n ≤ max_n.
inline Instance random_mechanical(std::mt19937_64& rng, int max_n = 12) {
  int d = std::uniform_int_distribution<int>(1, 2)(rng);
  int n = std::uniform_int_distribution<int>(4, max_n)(rng);
  wkam::PeriodicGrid grid = wkam::build_grid(d, n);
  auto U = wkam::sample_potential(random_trig(rng, d), grid);
  auto st = d == 2 && n >= 6 && std::bernoulli_distribution(0.5)(rng) ? wkam::StencilKind::extended : wkam::StencilKind::standard;
  return {wkam::mechanical_model(std::move(U)), st};
}

template <class F>
double integrate(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

}  // namespace oracle
