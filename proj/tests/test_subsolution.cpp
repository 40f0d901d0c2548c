#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chain.hpp"
#include "oracles.hpp"
#include "wkam/error.hpp"
#include "wkam/subsolution.hpp"

using namespace wkam;
using std::numbers::pi;
using testing_chain::run_chain;

TEST_SUITE("subsolution_lab") {

TEST_CASE("barrier rows dominate every edge and stay below h") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    auto inst = oracle::random_mechanical(rng, 9);
    auto c = run_chain(inst.model, inst.stencil, {}, true);
    for (std::size_t z : c.aubry.nodes) {
      Subsolution s = barrier_subsolution(c.h, c.graph, z);
      CHECK(s.max_violation <= 1e-9);
      CHECK(domination_violation(s.u, c.graph) <= 1e-9);
      for (std::size_t x : c.h.sources())
        for (std::size_t y = 0; y < c.graph.grid.size(); ++y) CHECK(s.u[y] - s.u[x] <= c.h.value(x, y) + 1e-9);
    }
  }
}

TEST_CASE("a row that is not a subsolution is rejected") {
  PeriodicGrid g = build_grid(1, 16);
  auto c = run_chain(mechanical_model(sample_potential(TrigPotential{1, {TrigTerm{-1, {1, 0, 0}, 0}}}, g)),
                     StencilKind::standard, {}, true);
  BarrierMatrix bad = c.h;
  bad.at(0, 5) += 1.0;
  CHECK_THROWS_AS(barrier_subsolution(bad, c.graph, 0), NumericalInconsistency);
}

TEST_CASE("representation formula is attained by barrier rows") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    auto inst = oracle::random_mechanical(rng, 10);
    auto c = run_chain(inst.model, inst.stencil, 1e-9);
    RepresentationReport r = representation_check(c.h, c.aubry, c.aubry.nodes, false);
    CHECK(r.max_gap <= 1e-9);
    CHECK(r.max_violation <= 1e-9);
    CHECK(r.attained);
    CHECK(r.pairs == c.aubry.nodes.size() * c.graph.grid.size());
  }
}

TEST_CASE("constants alone do not attain a positive barrier") {
  PeriodicGrid g = build_grid(2, 16);
  auto c = run_chain(mechanical_model(sample_potential(TwoWellPotential{}, g)), StencilKind::standard);
  RepresentationReport r = representation_check(c.h, c.aubry, {}, true);
  CHECK_FALSE(r.attained);
  CHECK(r.max_gap > 0.1);
}

TEST_CASE("analytic static circle subsolution has O(h) residual") {
  double prev = 1e9;
  for (int n : {64, 128, 256}) {
    auto m = testing_chain::static_circle_model(n);
    ScalarField u(m.grid());
    for (std::size_t i = 0; i < u.size(); ++i) {
      double x = static_cast<double>(i) / n;
      u[i] = (1 - std::cos(pi * x)) / pi - 2 * x / pi;
    }
    ResidualReport r = verify_subsolution(u, m, 0.0);
    CHECK(r.max <= 10 * m.grid().spacing());
    CHECK(r.constant <= 10);
    CHECK(r.constant <= prev + 1e-12);
    prev = r.constant;
  }
}

TEST_CASE("barrier subsolution residual constant does not grow under refinement") {
  double prev = 1e9;
  for (int n : {32, 64, 128}) {
    PeriodicGrid g = build_grid(1, n);
    auto c = run_chain(mechanical_model(sample_potential(TrigPotential{1, {TrigTerm{-1, {1, 0, 0}, 0}}}, g)),
                       StencilKind::standard);
    Subsolution s = barrier_subsolution(c.h, c.graph, c.aubry.nodes.front());
    ResidualReport r = verify_subsolution(s.u, c.model, c.alpha);
    CHECK(r.constant <= prev * 1.05);
    prev = r.constant;
  }
}

TEST_CASE("evaluation maps are class-constant and 1-Lipschitz") {
  PeriodicGrid g = build_grid(1, 512);
  auto c = run_chain(mechanical_model(sample_potential(CantorFlatPotential{}, g)), StencilKind::standard);
  Subsolution a = barrier_subsolution(c.h, c.graph, c.q.representatives.front());
  Subsolution b = barrier_subsolution(c.h, c.graph, c.q.representatives.back());
  DifferenceFunction w = difference(a.u, b.u);
  EvaluationMap e = evaluation_map(w, c.q);
  CHECK(e.lipschitz_ok);
  CHECK(e.lipschitz_excess <= 0);
  for (std::size_t p = 0; p < c.q.size(); ++p) CHECK(e.spread[p] <= e.budget);
  for (std::size_t p = 0; p < c.q.size(); ++p)
    for (std::size_t r = 0; r < c.q.size(); ++r)
      CHECK(std::abs(e.values[p] - e.values[r]) <= c.q.at(p, r) + 2 * c.q.tol_class);
}

TEST_CASE("difference arguments") {
  PeriodicGrid g = build_grid(1, 16), g2 = build_grid(1, 32);
  CHECK_THROWS_AS(difference(ScalarField(g), ScalarField(g2)), std::invalid_argument);
  CHECK_THROWS_AS(difference(ScalarField(g), ScalarField(g), 0.0), std::invalid_argument);
}

TEST_CASE("Morse–Sard estimate") {
  PeriodicGrid g = build_grid(2, 32);
  DifferenceFunction flat = difference(ScalarField(g, 3.0), ScalarField(g, 1.0));
  CHECK(morse_sard_estimate(flat).bound == 0);

  double prev = 1e9;
  for (int n : {32, 64, 128}) {
    PeriodicGrid gn = build_grid(2, n);
    ScalarField u(gn);
    for (std::size_t i = 0; i < gn.size(); ++i) {
      Point p = gn.position(i);
      u[i] = std::cos(2 * pi * p[0]) + std::cos(2 * pi * p[1]);
    }
    MorseSardEstimate est = morse_sard_estimate(difference(u, ScalarField(gn)));
    CHECK(est.critical_nodes > 0);
    CHECK(est.bound <= 0.5 * prev + 1e-12);
    prev = est.bound;
  }
}

TEST_CASE("Morse–Sard estimate of a band with small nonzero slope stabilises") {
  // w′ = ε on a band of width ¼, steep elsewhere: the band stays critical at
  // every resolution where ε ≤ κh, so take ε ≪ κh for all n tested.
  const double eps = 1e-3;
  std::vector<double> bounds;
  for (int n : {64, 128, 256}) {
    PeriodicGrid g = build_grid(1, n);
    ScalarField u(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      double x = g.position(i)[0];
      u[i] = x < 0.25 ? eps * x : eps * 0.25 + (x - 0.25) * (1 - x) * 4;
    }
    bounds.push_back(morse_sard_estimate(difference(u, ScalarField(g))).bound);
  }
  for (double b : bounds) CHECK(b >= eps * 0.25 * 0.9);
}

}
