#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>
#include <random>

#include "wkam/cube_cover.hpp"
#include "wkam/flatness.hpp"
#include "wkam/potential.hpp"
#include "wkam/whitney.hpp"

using namespace wkam;
using std::numbers::pi;

namespace {

std::vector<char> random_mask(const PeriodicGrid& g, const WhitneyDomain& dom, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(density);
  std::vector<char> mask(g.size(), 0);
  bool any = false;
  for (std::size_t x = 0; x < g.size(); ++x) {
    Coord c = g.coord(x);
    bool inside = true;
    for (int a = 0; a < g.dim(); ++a) inside &= c[a] >= dom.lo[a] && c[a] <= dom.lo[a] + dom.side;
    if (inside && coin(rng)) mask[x] = 1, any = true;
  }
  if (!any) mask[g.index(dom.lo)] = 1;
  return mask;
}

bool closed_box_contains(const WhitneyCube& c, const Point& y, int d) {
  for (int a = 0; a < d; ++a)
    if (y[a] < c.lo[a] - 1e-15 || y[a] > c.lo[a] + c.edge + 1e-15) return false;
  return true;
}

}  // namespace

TEST_SUITE("sard_whitney") {

TEST_CASE("flatness stencil overflow") {
  PeriodicGrid g = build_grid(1, 16);
  std::vector<std::size_t> at{0};
  CHECK_THROWS_WITH(flatness_order(ScalarField(g), at, 5), doctest::Contains("stencil overflow"));
  CHECK(max_flatness_order(build_grid(1, 64)) == 6);
}

TEST_CASE("flatness of a Morse minimum is 1") {
  PeriodicGrid g = build_grid(2, 64);
  ScalarField U = sample_potential(TrigPotential{2, {TrigTerm{-1, {1, 0, 0}, 0}, TrigTerm{-1, {0, 1, 0}, 0}}}, g);
  std::vector<std::size_t> at{0};
  CHECK(flatness_order(U, at, 3).order[0] == 1);
}

TEST_CASE("image measure bound of cos 2πx over one critical node") {
  PeriodicGrid g = build_grid(1, 64);
  ScalarField u(g);
  for (std::size_t i = 0; i < g.size(); ++i) u[i] = std::cos(2 * pi * i / 64.0);
  std::vector<char> A(g.size(), 0);
  A[0] = 1;
  CubeCover c = image_measure_bound(u, A, 8);
  REQUIRE(c.cubes.size() == 1);
  CHECK(c.union_length == doctest::Approx(1 - std::cos(pi / 4)).epsilon(1e-14));
  CHECK(c.sum_of_widths == doctest::Approx(c.union_length));
  CHECK_THROWS_AS(image_measure_bound(u, A, 7), std::invalid_argument);
  std::vector<char> none(g.size(), 0);
  CHECK_THROWS_AS(image_measure_bound(u, none, 8), std::invalid_argument);
}

TEST_CASE("overlapping intervals are not double counted") {
  PeriodicGrid g = build_grid(1, 16);
  ScalarField u(g);
  for (std::size_t i = 0; i < g.size(); ++i) u[i] = i < 8 ? i * 0.1 : (16 - i) * 0.1;
  std::vector<char> A(g.size(), 1);
  CubeCover c = image_measure_bound(u, A, 4);
  CHECK(c.union_length == doctest::Approx(0.8));
  CHECK(c.sum_of_widths == doctest::Approx(1.6));
}

TEST_CASE("constant u has zero image measure") {
  PeriodicGrid g = build_grid(2, 32);
  std::vector<char> A(g.size(), 1);
  CHECK(image_measure_bound(ScalarField(g, 2.5), A, 8).union_length == 0);
  std::vector<int> ladder{2, 4, 8, 16};
  ScalingSweep s = scaling_sweep(ScalarField(g, 2.5), ScalarField(g), A, ladder);
  CHECK(s.exact_zero);
  CHECK_FALSE(s.slope.has_value());
}

TEST_CASE("scaling sweep: oscillation next to a cubic zero decays like N^-3") {
  PeriodicGrid g = build_grid(1, 1024);
  ScalarField u(g);
  for (std::size_t i = 0; i < g.size(); ++i) u[i] = std::pow(std::sin(2 * pi * (i / 1024.0 - 0.5)), 3);
  FlatProfilePotential fp;
  fp.flat_order = 3;
  fp.center = Point{0.5, 0, 0};
  ScalarField U = sample_potential(fp, g);
  std::vector<char> A(g.size(), 0);
  A[512] = 1;
  std::vector<int> ladder{8, 16, 32, 64, 128};
  ScalingSweep s = scaling_sweep(u, U, A, ladder);
  for (std::size_t i = 0; i < ladder.size(); ++i)
    CHECK(s.bounds[i] == doctest::Approx(std::pow(std::sin(2 * pi / ladder[i]), 3)).epsilon(1e-12));
  REQUIRE(s.slope.has_value());
  CHECK(*s.slope == doctest::Approx(-3.0).epsilon(0.05));
  CHECK(s.flatness == 3);
  CHECK(s.predicted == doctest::Approx(-1.5));
  CHECK_FALSE(s.within_tolerance);
  std::vector<int> short_ladder{8, 16, 32};
  CHECK_THROWS_AS(scaling_sweep(u, U, A, short_ladder), std::invalid_argument);
}

TEST_CASE("Whitney decomposition against brute-force geometry") {
  PeriodicGrid g = build_grid(2, 32);
  WhitneyDomain dom{{8, 8, 0}, 16};
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto mask = random_mask(g, dom, 0.04, seed);
    WhitneyDecomposition dec = whitney_decompose(g, dom, mask, seed, 3);
    const auto& cubes = dec.cubes;
    // Pairwise interiors.
    std::size_t overlaps = 0;
    for (std::size_t i = 0; i < cubes.size(); ++i)
      for (std::size_t j = i + 1; j < cubes.size(); ++j) {
        bool inter = true;
        for (int a = 0; a < 2; ++a)
          inter &= std::min(cubes[i].lo[a] + cubes[i].edge, cubes[j].lo[a] + cubes[j].edge) >
                   std::max(cubes[i].lo[a], cubes[j].lo[a]) + 1e-15;
        overlaps += inter;
      }
    CHECK(overlaps == 0);
    CHECK(dec.properties.disjoint_interiors);
    // Every W₁ node off A* lies in a closed cube.
    for (std::size_t x : dec.domain_nodes()) {
      if (mask[x]) continue;
      Point y = g.position(x);
      bool found = false;
      for (const auto& c : cubes) found |= closed_box_contains(c, y, 2);
      CHECK(found);
    }
    CHECK(dec.properties.covers_nodes);
    // Depth-capped cells fail the split rule, so they hug A*.
    for (const auto& c : dec.residual) CHECK(c.edge * std::sqrt(2.0) > c.dist / 4);
    // Split rule and the lower comparability bound it implies.
    for (const auto& c : cubes) {
      double ratio = c.edge / c.dist;
      CHECK(ratio * std::sqrt(2.0) <= 0.25 + 1e-12);
      CHECK(ratio >= 1 / (10 * std::sqrt(2.0)) - 1e-12);
      double brute = 1e9;
      for (const Point& a : dec.anchors) {
        double s = 0;
        for (int k = 0; k < 2; ++k) {
          double t = std::max({c.lo[k] - a[k], 0.0, a[k] - c.lo[k] - c.edge});
          s += t * t;
        }
        brute = std::min(brute, std::sqrt(s));
      }
      CHECK(c.dist == doctest::Approx(brute).epsilon(1e-12));
    }
    CHECK(dec.properties.constants_finite());
    CHECK(dec.properties.overlap <= 12);
  }
}

TEST_CASE("Whitney decomposition in one and three dimensions") {
  PeriodicGrid g1 = build_grid(1, 64);
  WhitneyDomain d1{{16, 0, 0}, 32};
  auto m1 = random_mask(g1, d1, 0.1, 5);
  auto dec1 = whitney_decompose(g1, d1, m1);
  CHECK(dec1.properties.disjoint_interiors);
  CHECK(dec1.properties.covers_nodes);
  PeriodicGrid g3 = build_grid(3, 16);
  WhitneyDomain d3{{4, 4, 4}, 8};
  auto m3 = random_mask(g3, d3, 0.02, 5);
  auto dec3 = whitney_decompose(g3, d3, m3, 1, 3);
  CHECK(dec3.properties.disjoint_interiors);
  CHECK(dec3.properties.covers_nodes);
  CHECK(dec3.properties.constants_finite());
}

TEST_CASE("Whitney domain validation") {
  PeriodicGrid g = build_grid(2, 32);
  std::vector<char> mask(g.size(), 0);
  mask[g.index({10, 10})] = 1;
  CHECK_THROWS_AS(whitney_decompose(g, {{8, 8, 0}, 12}, mask), std::invalid_argument);
  CHECK_THROWS_AS(whitney_decompose(g, {{20, 8, 0}, 16}, mask), std::invalid_argument);
  std::vector<char> empty(g.size(), 0);
  CHECK_THROWS_AS(whitney_decompose(g, {{8, 8, 0}, 16}, empty), std::invalid_argument);
}

TEST_CASE("bump profile") {
  PeriodicGrid g = build_grid(2, 32);
  WhitneyDomain dom{{8, 8, 0}, 16};
  auto mask = random_mask(g, dom, 0.05, 9);
  auto dec = whitney_decompose(g, dom, mask, 1, 3);
  PartitionOfUnity pou(dec, 4);
  double edge = 0.5 * (1 + dec.lambda);
  CHECK(pou.profile(0.0) == 1);
  CHECK(pou.profile(0.5) == 1);
  CHECK(pou.profile(edge) == 0);
  CHECK(pou.profile(-0.3) == 1);
  double prev = 1;
  for (int i = 0; i <= 100; ++i) {
    double v = pou.profile(0.5 + (edge - 0.5) * i / 100.0);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
  // Order-4 contact at both ends of the transition.
  double w = edge - 0.5;
  for (double t : {1e-2, 5e-3}) {
    CHECK(1 - pou.profile(0.5 + t * w) <= 200 * std::pow(t, 5));
    CHECK(pou.profile(edge - t * w) <= 200 * std::pow(t, 5));
  }
}

TEST_CASE("partition of unity sums to one off A*") {
  PeriodicGrid g = build_grid(2, 32);
  WhitneyDomain dom{{8, 8, 0}, 16};
  auto mask = random_mask(g, dom, 0.03, 4);
  auto dec = whitney_decompose(g, dom, mask, 1, 3);
  PartitionOfUnity pou(dec, 4);
  PartitionReport r = check_partition(pou, 1500);
  CHECK(r.samples == 1500);
  CHECK(r.uncovered == 0);
  CHECK(r.below_resolution < r.samples / 5);
  CHECK(r.max_sum_error <= 1e-12);
  CHECK(r.supports_ok);
  CHECK(std::isfinite(r.M1));
  CHECK(std::isfinite(r.alpha));
  CHECK(r.max_active >= 1);
}

}
