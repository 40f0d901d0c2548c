#pragma once

#include <span>
#include <vector>

#include "wkam/action_graph.hpp"

namespace wkam {

enum class BarrierKind { mane_potential, peierls };

// Rows indexed by `sources`, columns by all grid nodes.
class BarrierMatrix {
 public:
  BarrierMatrix() = default;
  BarrierMatrix(PeriodicGrid grid, BarrierKind kind, std::vector<std::size_t> sources);

  const PeriodicGrid& grid() const { return grid_; }
  BarrierKind kind() const { return kind_; }
  const std::vector<std::size_t>& sources() const { return sources_; }
  std::size_t rows() const { return sources_.size(); }
  std::size_t cols() const { return grid_.size(); }

  double at(std::size_t row, std::size_t col) const { return values_[row * cols() + col]; }
  double& at(std::size_t row, std::size_t col) { return values_[row * cols() + col]; }
  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols(), cols()}; }
  std::span<double> row(std::size_t r) { return {values_.data() + r * cols(), cols()}; }
  const std::vector<double>& values() const { return values_; }

  bool has_row(std::size_t node) const;
  std::size_t row_of(std::size_t node) const;
  // Entry for grid nodes x (must be a source) and y.
  double value(std::size_t x, std::size_t y) const { return at(row_of(x), y); }

 private:
  PeriodicGrid grid_;
  BarrierKind kind_ = BarrierKind::mane_potential;
  std::vector<std::size_t> sources_;
  std::vector<std::size_t> row_index_;
  std::vector<double> values_;
};

// Time-free minimal action Φ(x,y) over nontrivial paths. The diagonal holds
// the loop cost of x: the cheaper of its stationary loop and the best closed
// path through x.
BarrierMatrix mane_potential(const ActionGraph& graph, std::span<const std::size_t> sources, int threads = 1);
BarrierMatrix mane_potential(const ActionGraph& graph, int threads = 1);

// Nodes on zero-cost cycles of a graph at its critical level. Edges count as
// tight when their reduced cost is at most tol.
std::vector<std::size_t> critical_nodes(const ActionGraph& graph, double tol = 1e-10);

// h(x,y) = min over critical z of Φ(x,z) + Φ(z,y), where passing through z
// costs nothing extra. `phi` must carry a row for every critical node.
BarrierMatrix peierls_barrier(const BarrierMatrix& phi, std::span<const std::size_t> critical);

// h(x,x) for every node, from one forward and one backward solve per
// critical node.
std::vector<double> peierls_diagonal(const ActionGraph& graph, std::span<const std::size_t> critical,
                                     int threads = 1);

}  // namespace wkam
