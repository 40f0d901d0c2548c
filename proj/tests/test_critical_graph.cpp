#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "wkam/action_graph.hpp"
#include "wkam/barrier.hpp"
#include "wkam/critical_value.hpp"
#include "wkam/error.hpp"
#include "wkam/fast_march.hpp"
#include "wkam/minplus.hpp"

using namespace wkam;
using std::numbers::pi;

namespace {

LagrangianModel cosine_model(int n) {
  PeriodicGrid g = build_grid(1, n);
  return mechanical_model(sample_potential(TrigPotential{1.0, {TrigTerm{-1.0, {1, 0, 0}, 0.0}}}, g));
}

}  // namespace

TEST_SUITE("critical_graph") {

TEST_CASE("stencils") {
  CHECK(make_stencil(1, StencilKind::standard).size() == 2);
  CHECK(make_stencil(2, StencilKind::nearest).size() == 4);
  CHECK(make_stencil(2, StencilKind::standard).size() == 8);
  CHECK(make_stencil(2, StencilKind::extended).size() == 16);
  CHECK(make_stencil(3, StencilKind::standard).size() == 26);
  CHECK(parse_stencil("default") == StencilKind::standard);
  CHECK_THROWS(parse_stencil("hexagonal"));
}

TEST_CASE("edge weights on the flat potential") {
  PeriodicGrid g = build_grid(2, 8);
  LagrangianModel m = mechanical_model(ScalarField(g));
  ActionGraph G = build_action_graph(m, 0.5, StencilKind::standard);
  for (std::size_t x = 0; x < g.size(); ++x)
    for (std::size_t s = 0; s < G.degree(); ++s) CHECK(G.weight(x, s) == doctest::Approx(G.edge_length[s]));
  CHECK(G.stationary[0] == doctest::Approx(0.5));
}

TEST_CASE("sub-critical radicand is an error") {
  LagrangianModel m = cosine_model(16);
  CHECK_THROWS_AS(build_action_graph(m, -0.1), NumericalInconsistency);
  CHECK_NOTHROW(build_action_graph(m, -1e-8));
}

TEST_CASE("critical value: closed form, ratio cycle, min-plus and Floyd–Warshall agree") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    auto inst = oracle::random_mechanical(rng, 8);
    const auto& U = inst.model.potential;
    double cf = critical_value_closed_form(inst.model).alpha;
    double rc = critical_value_ratio_cycle(inst.model, inst.stencil).alpha;
    double mp = critical_value_minplus(inst.model, inst.stencil).alpha;
    double fw = oracle::critical_level_fw(inst.model, inst.stencil, -U.max() - 1, -U.min() + 1);
    CHECK(cf == 0.0 - U.min());
    CHECK(std::abs(rc - cf) <= 1e-9);
    CHECK(std::abs(mp - cf) <= 1e-9);
    CHECK(std::abs(fw - cf) <= 1e-9);
  }
}

TEST_CASE("ratio-cycle certificate is a zero-cost cycle") {
  PeriodicGrid g = build_grid(1, 32);
  LagrangianModel m = make_model(ModelKind::linear_drift, ScalarField(g), closed_form({1.0}, ScalarField(g)));
  CriticalValue cv = critical_value_ratio_cycle(m, StencilKind::standard);
  // Constant-speed loop: cost √(2k) − c per unit length vanishes at k = ½c².
  CHECK(cv.alpha == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(cv.certificate.nodes.size() >= 2);
  CycleAction a = cycle_action(m, build_action_graph(m, cv.alpha).offsets, cv.certificate, cv.alpha);
  CHECK(a.time > 0);
}

TEST_CASE("strong drift needs an extended bracket") {
  PeriodicGrid g = build_grid(1, 16);
  LagrangianModel m = make_model(ModelKind::linear_drift, ScalarField(g), closed_form({3.0}, ScalarField(g)));
  CHECK(critical_value_ratio_cycle(m).alpha == doctest::Approx(4.5).epsilon(1e-9));
}

TEST_CASE("Mañé potential matches Floyd–Warshall") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    auto inst = oracle::random_mechanical(rng, 9);
    double alpha = critical_value_closed_form(inst.model).alpha;
    ActionGraph G = build_action_graph(inst.model, alpha, inst.stencil);
    BarrierMatrix phi = mane_potential(G, 2);
    oracle::Dense fw = oracle::floyd_warshall(G);
    double err = 0;
    for (std::size_t x = 0; x < fw.n; ++x)
      for (std::size_t y = 0; y < fw.n; ++y) err = std::max(err, std::abs(phi.value(x, y) - fw(x, y)));
    CHECK(err <= 1e-12);
    // Mechanical models give a symmetric Φ.
    for (std::size_t x = 0; x < fw.n; ++x)
      for (std::size_t y = 0; y < x; ++y) CHECK(phi.value(x, y) == doctest::Approx(phi.value(y, x)).epsilon(1e-12));
  }
}

TEST_CASE("Peierls barrier: composition route, min-plus powers and Floyd–Warshall") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    auto inst = oracle::random_mechanical(rng, 7);
    double alpha = critical_value_closed_form(inst.model).alpha;
    ActionGraph G = build_action_graph(inst.model, alpha, inst.stencil);
    auto crit = critical_nodes(G);
    BarrierMatrix h = peierls_barrier(mane_potential(G), crit);
    LiminfResult lim = minplus_power_liminf(G, std::size_t{1} << 20);
    oracle::Dense fw = oracle::peierls_fw(G);
    double e1 = 0, e2 = 0;
    for (std::size_t x = 0; x < fw.n; ++x)
      for (std::size_t y = 0; y < fw.n; ++y) {
        e1 = std::max(e1, std::abs(h.value(x, y) - fw(x, y)));
        e2 = std::max(e2, std::abs(lim.barrier.value(x, y) - fw(x, y)));
      }
    CHECK(e1 <= 1e-9);
    CHECK(e2 <= 1e-9);
    auto diag = peierls_diagonal(G, crit);
    for (std::size_t x = 0; x < fw.n; ++x) CHECK(diag[x] == doctest::Approx(h.value(x, x)).epsilon(1e-12));
  }
}

TEST_CASE("min-plus liminf rejects short horizons") {
  LagrangianModel m = cosine_model(8);
  ActionGraph G = build_action_graph(m, 0.0);
  CHECK_THROWS_AS(minplus_power_liminf(G, 4), std::invalid_argument);
}

TEST_CASE("negative cycles below the critical level are detected") {
  PeriodicGrid g = build_grid(1, 16);
  LagrangianModel m = make_model(ModelKind::linear_drift, ScalarField(g), closed_form({1.0}, ScalarField(g)));
  ActionGraph G = build_action_graph(m, 0.3);
  CHECK_THROWS_AS(critical_nodes(G), NumericalInconsistency);
}

TEST_CASE("scaling U by λ² scales Φ by λ") {
  PeriodicGrid g = build_grid(2, 10);
  std::mt19937_64 rng(3);
  ScalarField U = sample_potential(oracle::random_trig(rng, 2), g);
  double m = U.min();
  for (std::size_t i = 0; i < g.size(); ++i) U[i] -= m;
  ScalarField U4 = U;
  for (std::size_t i = 0; i < g.size(); ++i) U4[i] *= 4;
  BarrierMatrix a = mane_potential(build_action_graph(mechanical_model(U), 0.0));
  BarrierMatrix b = mane_potential(build_action_graph(mechanical_model(U4), 0.0));
  // The diagonal holds the stationary loop U + α, which scales by λ² instead.
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t y = 0; y < a.cols(); ++y)
      if (y != a.sources()[r]) CHECK(b.at(r, y) == doctest::Approx(2 * a.at(r, y)).epsilon(1e-12));
}

TEST_CASE("Jacobi distance on the cosine potential") {
  double exact = oracle::integrate([](double t) { return 2 * std::sin(pi * t); }, 0.0, 0.5);
  CHECK(exact == doctest::Approx(2 / pi).epsilon(1e-14));
  LagrangianModel m = cosine_model(256);
  ActionGraph G = build_action_graph(m, 0.0);
  std::vector<std::size_t> src{0};
  BarrierMatrix phi = mane_potential(G, src);
  CHECK(std::abs(phi.value(0, 128) - exact) / exact < 0.01);
  FastMarchResult fm = fast_march_jacobi(m, 0.0, 0);
  CHECK(std::abs(fm.distance[128] - exact) / exact < 0.02);
  for (std::size_t i = 1; i < fm.accepted.size(); ++i)
    CHECK(fm.distance[fm.accepted[i]] >= fm.distance[fm.accepted[i - 1]]);
}

TEST_CASE("fast marching on the flat potential and with drift") {
  PeriodicGrid g = build_grid(2, 16);
  FastMarchResult fm = fast_march_jacobi(mechanical_model(ScalarField(g)), 0.0, 0);
  CHECK(fm.distance.max() == 0);
  LagrangianModel drift = make_model(ModelKind::linear_drift, ScalarField(g), closed_form({1.0, 0.0}, ScalarField(g)));
  CHECK_THROWS_AS(fast_march_jacobi(drift, 0.5, 0), std::invalid_argument);
}

TEST_CASE("fast marching agrees with the 16-neighbour graph between two wells") {
  PeriodicGrid g = build_grid(2, 64);
  LagrangianModel m = mechanical_model(sample_potential(TwoWellPotential{}, g));
  std::size_t w1 = g.index({16, 32}), w2 = g.index({48, 32});
  std::vector<std::size_t> src{w1};
  BarrierMatrix phi = mane_potential(build_action_graph(m, 0.0, StencilKind::extended), src);
  FastMarchResult fm = fast_march_jacobi(m, 0.0, w1);
  CHECK(std::abs(fm.distance[w2] - phi.value(w1, w2)) / phi.value(w1, w2) < 0.03);
}

}
