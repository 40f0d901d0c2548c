#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wkam/finite_difference.hpp"
#include "wkam/flatness.hpp"
#include "wkam/grid.hpp"
#include "wkam/model.hpp"
#include "wkam/potential.hpp"

using namespace wkam;
using std::numbers::pi;

TEST_SUITE("torus_model") {

TEST_CASE("grid sizes, spacing and wrap") {
  PeriodicGrid g1 = build_grid(1, 8);
  CHECK(g1.size() == 8);
  CHECK(g1.spacing() == 0.125);
  CHECK(build_grid(2, 16).size() == 256);
  PeriodicGrid g3 = build_grid(3, 4);
  CHECK(g3.size() == 64);
  CHECK(g3.wrap(3 + 1) == 0);
  CHECK(g3.wrap(-1) == 3);
  for (std::size_t i = 0; i < g3.size(); ++i) CHECK(g3.index(g3.coord(i)) == i);
  CHECK(g3.shifted(g3.index({3, 3, 3}), {1, 1, 1}) == 0);
}

TEST_CASE("grid rejects bad dimensions") {
  CHECK_THROWS_AS(build_grid(0, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(4, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(1, 3), std::invalid_argument);
}

TEST_CASE("torus distance wraps") {
  CHECK(torus_distance(Point{0.05, 0, 0}, Point{0.95, 0, 0}, 1) == doctest::Approx(0.1));
  PeriodicGrid g = build_grid(2, 10);
  CHECK(torus_distance(g, g.index({0, 0}), g.index({9, 9})) == doctest::Approx(std::sqrt(2.0) * 0.1));
}

TEST_CASE("zero and trig families") {
  PeriodicGrid g = build_grid(2, 12);
  ScalarField z = sample_potential(ZeroPotential{}, g);
  CHECK(z.min() == 0);
  CHECK(z.max() == 0);

  PeriodicGrid line = build_grid(1, 256);
  TrigPotential t{1.0, {TrigTerm{-1.0, {1, 0, 0}, 0.0}}};
  ScalarField U = sample_potential(t, line);
  double best = 1e9;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    double v = 1 - std::cos(2 * pi * i / 256.0);
    CHECK(U[i] == doctest::Approx(v).epsilon(1e-12));
    if (v < best) best = v, arg = i;
  }
  CHECK(U.argmin() == arg);
  CHECK(U.min() == doctest::Approx(0.0));
}

TEST_CASE("two-well minima sit at the centres") {
  PeriodicGrid g = build_grid(2, 32);
  ScalarField U = sample_potential(TwoWellPotential{}, g);
  std::size_t m1 = g.index({8, 16}), m2 = g.index({24, 16});
  CHECK(U[m1] == 0);
  CHECK(U[m2] == 0);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (i != m1 && i != m2) CHECK(U[i] > 0);
}

TEST_CASE("cantor_flat vanishes exactly on the snapped endpoints") {
  PeriodicGrid g = build_grid(1, 512);
  CantorFlatPotential spec;
  ScalarField U = sample_potential(spec, g);
  auto zeros = cantor_zero_nodes(spec, g);
  CHECK(zeros.size() == 16);
  std::vector<char> is_zero(g.size(), 0);
  for (std::size_t z : zeros) is_zero[z] = 1;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (is_zero[i]) CHECK(U[i] == 0);
    else CHECK(U[i] > 0);
  }
  // Endpoints of the level-3 construction on [1/8, 7/8].
  double len = 0.75;
  CHECK(zeros.front() == 64);
  CHECK(zeros.back() == 448);
  CHECK(zeros[1] == static_cast<std::size_t>(std::llround((0.125 + len / 27) * 512)));
}

TEST_CASE("cantor_flat rejects unresolvable levels") {
  CantorFlatPotential deep;
  deep.level = 6;
  CHECK_THROWS(sample_potential(deep, build_grid(1, 128)));
  CHECK_THROWS(sample_potential(CantorFlatPotential{}, build_grid(2, 16)));
}

// Even s gives |sin|^(s+1), which is not smooth at the centre; central
// stencils see only its even part there.
TEST_CASE("flat_profile has flatness exactly s") {
  for (int s : {1, 3}) {
    PeriodicGrid g = build_grid(1, 256);
    FlatProfilePotential spec;
    spec.flat_order = s;
    spec.center = Point{0.5, 0, 0};
    ScalarField U = sample_potential(spec, g);
    std::size_t c = g.index({128, 0, 0});
    std::vector<std::size_t> at{c};
    FlatnessReport rep = flatness_order(U, at, 4);
    CHECK(rep.order[0] == s);
    CHECK(rep.next_exceeds[0]);
  }
}

TEST_CASE("closed forms") {
  PeriodicGrid g = build_grid(1, 16);
  ClosedOneForm z = zero_form(g);
  CHECK(z.is_zero());
  CHECK_THROWS_AS(closed_form({1.0, 2.0}, ScalarField(g)), std::invalid_argument);
  ScalarField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::sin(2 * pi * i / 16.0);
  ClosedOneForm eta = closed_form({0.5}, f);
  CHECK_FALSE(eta.is_zero());
  CHECK(eta.loop_integral(0) == doctest::Approx(0.5));
  // Exact part integrates to a difference of f.
  CHECK(eta.edge_integral(3, {2, 0, 0}) == doctest::Approx(0.5 * 2 / 16.0 + f[5] - f[3]));
}

TEST_CASE("Liouville class") {
  PeriodicGrid g = build_grid(1, 16);
  LagrangianModel mech = mechanical_model(ScalarField(g));
  CHECK(liouville_class(mech) == std::vector<double>{0.0});
  LagrangianModel drift = make_model(ModelKind::linear_drift, ScalarField(g), closed_form({2 / pi}, ScalarField(g)));
  CHECK(liouville_class(drift)[0] == doctest::Approx(2 / pi));
  CHECK_THROWS_AS(make_model(ModelKind::mechanical, ScalarField(g), closed_form({1.0}, ScalarField(g))),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_model(ModelKind::mechanical, ScalarField(g), zero_form(g), 0.0), std::invalid_argument);
}

TEST_CASE("gradient by centred differences is second order") {
  double prev = 0;
  for (int n : {32, 64, 128}) {
    PeriodicGrid g = build_grid(2, n);
    ScalarField u(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      Point p = g.position(i);
      u[i] = std::sin(2 * pi * p[0]) * std::cos(2 * pi * p[1]);
    }
    VectorField grad = gradient_fd(u);
    double err = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      Point p = g.position(i);
      err = std::max(err, std::abs(grad[i][0] - 2 * pi * std::cos(2 * pi * p[0]) * std::cos(2 * pi * p[1])));
      err = std::max(err, std::abs(grad[i][1] + 2 * pi * std::sin(2 * pi * p[0]) * std::sin(2 * pi * p[1])));
    }
    if (prev > 0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.05));
    prev = err;
  }
}

TEST_CASE("FD stencils reproduce polynomial derivatives") {
  PeriodicGrid g = build_grid(1, 64);
  for (int m = 1; m <= 6; ++m) {
    ScalarField u(g);
    // Local monomial around node 32, far from the wrap.
    for (std::size_t i = 0; i < g.size(); ++i) u[i] = std::pow((static_cast<double>(i) - 32) / 64.0, m);
    double fact = std::tgamma(m + 1.0);
    CHECK(fd_derivative(u, 32, {m, 0, 0}) == doctest::Approx(fact).epsilon(1e-6));
  }
}

TEST_CASE("interpolation") {
  PeriodicGrid g = build_grid(2, 8);
  ScalarField u(g);
  for (std::size_t i = 0; i < g.size(); ++i) u[i] = static_cast<double>(i);
  CHECK(u.interpolate(g.position(19)) == 19);
  Point mid = g.position(g.index({2, 3}));
  mid[0] += 0.5 / 8;
  CHECK(u.interpolate(mid) == doctest::Approx(0.5 * (u[g.index({2, 3})] + u[g.index({3, 3})])));
  // Periodic wrap between node 7 and node 0 on axis 0.
  Point w{7.5 / 8, 0, 0};
  CHECK(u.interpolate(w) == doctest::Approx(0.5 * (u[7] + u[0])));
}

}
