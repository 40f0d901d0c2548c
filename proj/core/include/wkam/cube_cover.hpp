#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wkam/grid.hpp"

namespace wkam {

struct CoverCube {
  Coord corner{0, 0, 0};  // lattice coordinate of the lower corner
  int edge_nodes = 0;
  double lo = 0, hi = 0;  // oscillation interval of u over the closed cube
};

struct CubeCover {
  int subdivisions = 0;           // N cubes per axis
  std::vector<CoverCube> cubes;   // the cubes that meet A
  double union_length = 0;
  double sum_of_widths = 0;
};

// Splits T^d into N^d cubes. A cube meets A when A has a node in its
// half-open node range; its interval spans u over the closed node range.
CubeCover image_measure_bound(const ScalarField& u, std::span<const char> A, int N);

struct ScalingSweep {
  std::vector<int> ladder;
  std::vector<double> bounds;
  bool exact_zero = false;
  std::optional<double> slope;   // log–log least squares on positive rungs
  int flatness = 0;              // detected s on A (minimum over nodes)
  double predicted = 0;          // d − (s+2)/2
  bool within_tolerance = false; // |slope − predicted| ≤ 0.3
};

ScalingSweep scaling_sweep(const ScalarField& u, const ScalarField& U, std::span<const char> A,
                           std::span<const int> ladder, int s_max = 4);

}  // namespace wkam
