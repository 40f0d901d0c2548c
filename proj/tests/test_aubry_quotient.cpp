#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chain.hpp"
#include "oracles.hpp"
#include "wkam/error.hpp"

using namespace wkam;
using testing_chain::run_chain;

TEST_SUITE("aubry_quotient") {

TEST_CASE("flat potential: everything is one static class") {
  PeriodicGrid g = build_grid(2, 6);
  auto c = run_chain(mechanical_model(ScalarField(g)), StencilKind::standard, {}, true);
  CHECK(c.aubry.nodes.size() == g.size());
  for (double v : c.delta.values) CHECK(v == 0);
  CHECK(c.q.size() == 1);
  auto ladder = default_epsilon_ladder(c.q);
  ComponentReport r = disconnectedness_scan(c.q, ladder);
  for (const auto& rung : r.rungs) CHECK(rung.max_diameter == 0);
}

TEST_CASE("single minimum: δ through the minimum, Aubry set = argmin") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 4; ++trial) {
    auto inst = oracle::random_mechanical(rng, 8);
    auto c = run_chain(inst.model, inst.stencil, 1e-9, true);
    oracle::Dense phi = oracle::floyd_warshall(c.graph);
    std::vector<std::size_t> argmin;
    for (std::size_t x = 0; x < c.graph.grid.size(); ++x)
      if (c.model.potential[x] == c.model.potential.min()) argmin.push_back(x);
    CHECK(c.aubry.nodes == argmin);
    CHECK(c.aubry.outside_min_set.empty());
    if (argmin.size() != 1) continue;
    std::size_t z = argmin[0];
    auto at = [&](std::size_t a, std::size_t b) { return a == b ? 0.0 : phi(a, b); };
    for (std::size_t i = 0; i < c.delta.size(); ++i)
      for (std::size_t j = 0; j < c.delta.size(); ++j) {
        std::size_t x = c.delta.nodes[i], y = c.delta.nodes[j];
        double expect = at(x, z) + at(z, y) + at(y, z) + at(z, x);
        CHECK(c.delta.at(i, j) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(c.delta.at(i, j) == c.delta.at(j, i));
        CHECK(c.delta.at(i, j) >= 0);
      }
  }
}

TEST_CASE("two wells: two singleton classes at twice the Jacobi distance") {
  PeriodicGrid g = build_grid(2, 64);
  TwoWellPotential tw;
  auto c = run_chain(mechanical_model(sample_potential(tw, g)), StencilKind::extended);
  std::size_t m1 = g.index({16, 32}), m2 = g.index({48, 32});
  CHECK(c.aubry.nodes == std::vector<std::size_t>{m1, m2});
  REQUIRE(c.q.size() == 2);
  CHECK(c.q.classes[0] == std::vector<std::size_t>{m1});
  CHECK(c.q.classes[1] == std::vector<std::size_t>{m2});
  double jacobi = oracle::integrate(
      [&](double x) {
        double s1 = std::pow(std::sin(std::numbers::pi * (x - 0.25)), 2);
        double s2 = std::pow(std::sin(std::numbers::pi * (x - 0.75)), 2);
        return std::sqrt(2 * tw.height * -std::expm1(-s1 / (tw.width * tw.width)) * -std::expm1(-s2 / (tw.width * tw.width)));
      },
      0.25, 0.75);
  CHECK(std::abs(c.q.at(0, 1) - 2 * jacobi) / (2 * jacobi) < 0.01);

  ComponentRung below = epsilon_components(c.q, 0.99 * c.q.at(0, 1));
  CHECK(below.components == 2);
  CHECK(below.max_diameter == 0);
  ComponentRung above = epsilon_components(c.q, 1.01 * c.q.at(0, 1));
  CHECK(above.components == 1);
}

TEST_CASE("Cantor potential: every zero node is its own class") {
  PeriodicGrid g = build_grid(1, 1024);
  CantorFlatPotential spec;
  auto c = run_chain(mechanical_model(sample_potential(spec, g)), StencilKind::standard);
  auto zeros = cantor_zero_nodes(spec, g);
  CHECK(c.aubry.nodes == zeros);
  REQUIRE(c.q.size() == zeros.size());
  // Gap-crossing cost for the profile ((x−a)(b−x)/γ)^(s+1).
  auto gap_cost = [&](std::size_t ia, std::size_t ib) {
    double a = ia / 1024.0, b = ib / 1024.0, gl = b - a;
    return oracle::integrate(
        [&](double x) { return std::sqrt(2 * std::pow((x - a) * (b - x) / gl, spec.flat_order + 1)); }, a, b);
  };
  std::vector<double> costs;
  double total = 0;
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    std::size_t a = zeros[i], b = i + 1 < zeros.size() ? zeros[i + 1] : zeros[0] + 1024;
    costs.push_back(gap_cost(a, b));
    total += costs.back();
  }
  for (std::size_t p = 0; p < c.q.size(); ++p)
    for (std::size_t r = 0; r < c.q.size(); ++r)
      if (p != r) CHECK(c.q.at(p, r) > c.q.tol_class);
  for (std::size_t i = 0; i + 1 < zeros.size(); ++i) {
    double expect = 2 * std::min(costs[i], total - costs[i]);
    CHECK(std::abs(c.q.at(i, i + 1) - expect) / expect < 0.02);
  }
}

TEST_CASE("static circle: the whole circle is one static class") {
  auto c = run_chain(testing_chain::static_circle_model(64), StencilKind::standard);
  CHECK(c.aubry.nodes.size() == 64);
  CHECK(c.q.size() == 1);
}

TEST_CASE("static circle drift with U = sin² has a smaller Aubry set") {
  PeriodicGrid g = build_grid(1, 64);
  ScalarField U = sample_potential(TrigPotential{0.5, {TrigTerm{-0.5, {1, 0, 0}, 0.0}}}, g);
  auto m = make_model(ModelKind::linear_drift, U, closed_form({2 / std::numbers::pi}, ScalarField(g)));
  auto c = run_chain(m, StencilKind::standard);
  CHECK(c.alpha == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(c.aubry.nodes.size() < 64);
}

TEST_CASE("empty Aubry set reports the smallest residual") {
  PeriodicGrid g = build_grid(1, 8);
  std::vector<double> diag{0.7, 0.5, 0.9, 0.6, 0.8, 0.5, 0.75, 0.55};
  CHECK_THROWS_WITH_AS(aubry_set_from_diagonal(g, diag, 0.1), doctest::Contains("smallest residual h(x,x) is 0.5"),
                       std::runtime_error);
}

TEST_CASE("quotient arguments") {
  PeriodicGrid g = build_grid(1, 16);
  auto c = run_chain(mechanical_model(ScalarField(g)), StencilKind::standard, 1e-6);
  CHECK_THROWS_AS(quotient(c.delta, c.aubry, 1e-7), std::invalid_argument);
}

TEST_CASE("classes do not depend on the node order of the pseudometric") {
  PeriodicGrid g = build_grid(1, 256);
  auto c = run_chain(mechanical_model(sample_potential(CantorFlatPotential{2, 1, 0.125, 0.875}, g)),
                     StencilKind::standard);
  Pseudometric rev = c.delta;
  const std::size_t m = rev.size();
  std::reverse(rev.nodes.begin(), rev.nodes.end());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) rev.values[i * m + j] = c.delta.at(m - 1 - i, m - 1 - j);
  QuotientSpace q2 = quotient(rev, c.aubry, c.q.tol_class);
  CHECK(q2.classes == c.q.classes);
  CHECK(q2.delta_bar == c.q.delta_bar);
}

TEST_CASE("ε-components on a two-class quotient") {
  QuotientSpace q;
  q.classes = {{0}, {5}};
  q.representatives = {0, 5};
  q.delta_bar = {0, 0.8, 0.8, 0};
  q.spread = {0, 0, 0, 0};
  q.tol_class = 1e-3;
  CHECK(epsilon_components(q, 0.5).components == 2);
  CHECK(epsilon_components(q, 1.0).components == 1);
  CHECK(epsilon_components(q, 1.0).max_diameter == doctest::Approx(0.8));
  std::vector<double> bad{0.1, 0.5};
  CHECK_THROWS_AS(disconnectedness_scan(q, bad), std::invalid_argument);
  std::vector<double> ladder{2.0, 1.0, 0.5, 0.1};
  ComponentReport r = disconnectedness_scan(q, ladder);
  for (std::size_t i = 1; i < r.rungs.size(); ++i) {
    CHECK(r.rungs[i].components >= r.rungs[i - 1].components);
    CHECK(r.rungs[i].max_diameter <= r.rungs[i - 1].max_diameter);
  }
  REQUIRE(r.disconnected_at.has_value());
  CHECK(*r.disconnected_at == 2.0);
}

TEST_CASE("spread bound within classes") {
  auto c = run_chain(testing_chain::static_circle_model(48), StencilKind::standard);
  for (double s : c.q.spread) CHECK(s <= 2 * c.q.tol_class + 1e-12);
}

}
