#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "wkam/grid.hpp"

namespace wkam {

// Closed grid-aligned cube W₁ = [lo, lo + side]·spacing. side must be a power
// of two and lo + side < n on every axis, so W₁ does not wrap.
struct WhitneyDomain {
  Coord lo{0, 0, 0};
  int side = 0;
  bool operator==(const WhitneyDomain&) const = default;
};

struct WhitneyCube {
  std::array<std::int64_t, kMaxDim> fine_corner{0, 0, 0};  // sub-lattice units relative to W₁
  std::int64_t fine_size = 0;
  Point lo{0, 0, 0};
  double edge = 0;
  double dist = 0;           // d(K, A*)
  std::size_t anchor = 0;    // index of a nearest A* point
  Point center() const;
};

struct WhitneyProperties {
  std::size_t overlapping_pairs = 0;  // i
  bool disjoint_interiors = false;
  std::size_t uncovered_nodes = 0;    // ii
  bool covers_nodes = false;
  double edge_over_dist_min = 0, edge_over_dist_max = 0;  // iii: e_j / d_j
  double dilated_min = 0, dilated_max = 0;                // iv: d(y) / e_j on K_j^λ
  double neighbor_min = 0, neighbor_max = 0;              // v: e_j / d(z)
  int overlap = 0;                                        // vi: max dilated cubes at a point
  bool constants_finite() const;
};

struct WhitneyDecomposition {
  PeriodicGrid grid;
  WhitneyDomain domain;
  double lambda = 0;
  int refine = 4;  // sub-lattice has 2^refine cells per grid spacing
  std::vector<Point> anchors;
  std::vector<std::size_t> anchor_nodes;
  std::vector<WhitneyCube> cubes;
  std::vector<WhitneyCube> residual;  // depth-capped cubes next to A*, not part of the cover
  WhitneyProperties properties;

  Point domain_lo() const;
  double domain_edge() const;
  bool in_domain(const Point& y) const;
  double distance(const Point& y) const;
  std::size_t nearest_anchor(const Point& y) const;
  // Cubes whose dilation K^λ may contain y.
  std::vector<std::size_t> candidates(const Point& y) const;
  // Cubes whose dilation may come within `radius` of y.
  std::vector<std::size_t> candidates(const Point& y, double radius) const;
  bool dilated_contains(std::size_t j, const Point& y) const;
  double dilated_distance(std::size_t j, const Point& y) const;

  std::vector<std::vector<std::size_t>> buckets;
  std::vector<std::size_t> domain_nodes() const;
};

// Dyadic refinement of W₁: a cube is kept once diam ≤ ¼·d(K, A*), split
// otherwise, down to 2^-refine spacings. Properties i)–vi) are measured on
// exit. A* is the mask restricted to W₁ nodes.
WhitneyDecomposition whitney_decompose(const PeriodicGrid& grid, const WhitneyDomain& domain,
                                       std::span<const char> mask, std::uint64_t seed = 1, int refine = 4);

class PartitionOfUnity {
 public:
  PartitionOfUnity(const WhitneyDecomposition& dec, int order);

  const WhitneyDecomposition& decomposition() const { return *dec_; }
  int order() const { return order_; }
  // 1-D profile: 1 on [0, 1/2], 0 beyond (1+λ)/2, C^order in between.
  double profile(double t) const;
  double bump(std::size_t j, const Point& y) const;
  double sigma(const Point& y) const;
  // Nonzero φ_j(y) as (cube, value); empty where no dilated cube reaches y.
  std::vector<std::pair<std::size_t, double>> weights(const Point& y) const;

 private:
  const WhitneyDecomposition* dec_;
  int order_;
  std::vector<double> coeff_;
};

struct PartitionReport {
  std::size_t samples = 0;
  std::size_t uncovered = 0;
  std::size_t below_resolution = 0;  // uncovered but inside a residual cube
  double max_sum_error = 0;
  double M1 = 0;             // max ‖∇φ_j(y)‖·d(y)
  double alpha = 0;          // max ‖x_j − y‖ / d(y) over φ_j(y) ≠ 0
  bool supports_ok = true;   // φ_j(y) ≠ 0 only inside K_j^λ
  int max_active = 0;
};

PartitionReport check_partition(const PartitionOfUnity& pou, std::size_t samples, std::uint64_t seed = 7);

}  // namespace wkam
