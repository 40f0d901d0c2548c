#pragma once

#include <cstddef>
#include <vector>

#include "wkam/action_graph.hpp"
#include "wkam/barrier.hpp"

namespace wkam {

// Dense matrix over the (min, +) semiring; +inf marks a missing edge.
class MinPlusMatrix {
 public:
  MinPlusMatrix() = default;
  explicit MinPlusMatrix(std::size_t n);

  static MinPlusMatrix identity(std::size_t n);
  // One-step cost matrix of the graph, stationary loops on the diagonal.
  static MinPlusMatrix one_step(const ActionGraph& graph);

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  MinPlusMatrix multiply(const MinPlusMatrix& rhs, int threads = 1) const;
  // this ⊗ A for the sparse one-step matrix of `graph`.
  MinPlusMatrix step(const ActionGraph& graph) const;
  void min_assign(const MinPlusMatrix& other);

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

struct LiminfResult {
  BarrierMatrix barrier;  // kind peierls, all nodes as sources
  std::size_t power = 0;  // start of the accepted window
  double drift = 0;       // max change of the window minimum at the last doubling
};

// Brute-force liminf of min-plus powers of the one-step matrix. The window
// minimum over k ∈ [K, K + V) is tracked for K = V, 2V, 4V, ... (rounded to
// powers of two) until two consecutive windows agree, or K would exceed
// `horizon`. Throws NonConvergence (carrying the drift) in that case.
LiminfResult minplus_power_liminf(const ActionGraph& graph, std::size_t horizon = 0, int threads = 1);

}  // namespace wkam
