#pragma once

#include <optional>
#include <vector>

#include "wkam/action_graph.hpp"
#include "wkam/critical_value.hpp"

namespace wkam::detail {

struct PotentialResult {
  std::vector<double> potential;
  std::optional<Cycle> negative_cycle;
};

// Label-correcting search from a virtual source joined to every node by zero
// edges. Relaxations must improve by more than eps·(1+|d|); a negative cycle
// (including a negative stationary loop) is returned instead of a potential.
PotentialResult feasible_potential(const ActionGraph& g, double eps = 1e-13);

// Nodes of nontrivial strongly connected components of the tight subgraph
// (reduced cost ≤ tol), plus nodes whose stationary loop costs ≤ tol.
std::vector<std::size_t> tight_cycle_nodes(const ActionGraph& g, const std::vector<double>& potential, double tol);

// A closed walk through tight edges starting at `start` (which must be a
// tight-cycle node).
Cycle tight_cycle_through(const ActionGraph& g, const std::vector<double>& potential, double tol, std::size_t start);

// Shortest path lengths from src (or to src when reverse). Nonnegative
// weights use Dijkstra; otherwise label-correcting with cycle detection.
std::vector<double> single_source(const ActionGraph& g, std::size_t src, bool reverse);

}  // namespace wkam::detail
