#pragma once

#include <string>
#include <vector>

#include "wkam/grid.hpp"
#include "wkam/model.hpp"

namespace wkam {

// nearest: ±e_i. standard: all offsets in {−1,0,1}^d (8-neighbor in d=2,
// 26-neighbor in d=3; nearest in d=1). extended: primitive offsets with
// components in [−2,2] (16-neighbor in d=2).
enum class StencilKind { nearest, standard, extended };

StencilKind parse_stencil(const std::string& name);
const char* to_string(StencilKind kind);
std::vector<Coord> make_stencil(int d, StencilKind kind);

// Directed graph on the grid nodes. Edge s out of node x goes to
// x + offsets[s]; its weight is the time-optimized one-edge action at level
// alpha. Every node also carries a stationary self-loop (time 1, cost U+alpha).
struct ActionGraph {
  PeriodicGrid grid;
  std::vector<Coord> offsets;
  std::vector<double> edge_length;
  std::vector<double> weights;       // node-major, size() × offsets.size()
  std::vector<std::size_t> targets;  // same layout
  std::vector<std::size_t> reverse;  // offset index of −offsets[s]
  std::vector<double> stationary;
  double alpha = 0;
  bool has_negative_weights = false;

  std::size_t node_count() const { return grid.size(); }
  std::size_t degree() const { return offsets.size(); }
  double weight(std::size_t x, std::size_t s) const { return weights[x * offsets.size() + s]; }
  std::size_t target(std::size_t x, std::size_t s) const { return targets[x * offsets.size() + s]; }
  // Source of the edge that enters y along offset s.
  std::size_t source(std::size_t y, std::size_t s) const { return targets[y * offsets.size() + reverse[s]]; }
  double max_weight() const;
  double min_edge_length() const;
};

ActionGraph build_action_graph(const LagrangianModel& model, double alpha,
                               StencilKind stencil = StencilKind::standard);

}  // namespace wkam
