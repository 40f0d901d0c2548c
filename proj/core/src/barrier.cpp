#include "wkam/barrier.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "graph_algo.hpp"
#include "wkam/error.hpp"
#include "wkam/parallel.hpp"

namespace wkam {
namespace {
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

BarrierMatrix::BarrierMatrix(PeriodicGrid grid, BarrierKind kind, std::vector<std::size_t> sources)
    : grid_(grid), kind_(kind), sources_(std::move(sources)), row_index_(grid.size(), kNone) {
  for (std::size_t r = 0; r < sources_.size(); ++r) {
    if (sources_[r] >= grid_.size()) throw std::invalid_argument("source node out of range");
    if (row_index_[sources_[r]] != kNone) throw std::invalid_argument("duplicate source node");
    row_index_[sources_[r]] = r;
  }
  values_.assign(sources_.size() * grid_.size(), 0.0);
}

bool BarrierMatrix::has_row(std::size_t node) const { return node < row_index_.size() && row_index_[node] != kNone; }

std::size_t BarrierMatrix::row_of(std::size_t node) const {
  if (!has_row(node)) throw std::invalid_argument("node " + std::to_string(node) + " is not a barrier source");
  return row_index_[node];
}

BarrierMatrix mane_potential(const ActionGraph& g, std::span<const std::size_t> sources, int threads) {
  BarrierMatrix phi(g.grid, BarrierKind::mane_potential, {sources.begin(), sources.end()});
  parallel_for(sources.size(), threads, [&](std::size_t r) {
    std::size_t x = sources[r];
    std::vector<double> dist = detail::single_source(g, x, false);
    double loop = g.stationary[x];
    for (std::size_t s = 0; s < g.degree(); ++s) {
      std::size_t p = g.source(x, s);
      loop = std::min(loop, dist[p] + g.weight(p, s));
    }
    dist[x] = loop;
    std::copy(dist.begin(), dist.end(), phi.row(r).begin());
  });
  return phi;
}

BarrierMatrix mane_potential(const ActionGraph& g, int threads) {
  std::vector<std::size_t> all(g.node_count());
  std::iota(all.begin(), all.end(), 0);
  return mane_potential(g, all, threads);
}

std::vector<std::size_t> critical_nodes(const ActionGraph& g, double tol) {
  auto pot = detail::feasible_potential(g);
  if (pot.negative_cycle)
    throw NumericalInconsistency("negative cycle through node " + std::to_string(pot.negative_cycle->nodes.front()) +
                                 ": level alpha is sub-critical");
  return detail::tight_cycle_nodes(g, pot.potential, tol);
}

BarrierMatrix peierls_barrier(const BarrierMatrix& phi, std::span<const std::size_t> critical) {
  if (critical.empty()) throw NumericalInconsistency("empty critical node set: alpha is not the critical level");
  std::vector<std::size_t> zrow;
  for (std::size_t z : critical) zrow.push_back(phi.row_of(z));
  BarrierMatrix h(phi.grid(), BarrierKind::peierls, phi.sources());
  const std::size_t V = phi.cols();
  std::vector<double> best(V);
  for (std::size_t r = 0; r < phi.rows(); ++r) {
    std::size_t x = phi.sources()[r];
    std::fill(best.begin(), best.end(), kInf);
    for (std::size_t k = 0; k < critical.size(); ++k) {
      std::size_t z = critical[k];
      double to_z = x == z ? 0.0 : phi.at(r, z);
      auto from_z = phi.row(zrow[k]);
      for (std::size_t y = 0; y < V; ++y) {
        double v = to_z + (y == z ? 0.0 : from_z[y]);
        if (v < best[y]) best[y] = v;
      }
    }
    std::copy(best.begin(), best.end(), h.row(r).begin());
  }
  return h;
}

std::vector<double> peierls_diagonal(const ActionGraph& g, std::span<const std::size_t> critical, int threads) {
  if (critical.empty()) throw NumericalInconsistency("empty critical node set: alpha is not the critical level");
  const std::size_t V = g.node_count();
  std::vector<std::vector<double>> partial(critical.size());
  parallel_for(critical.size(), threads, [&](std::size_t k) {
    std::size_t z = critical[k];
    std::vector<double> out = detail::single_source(g, z, false);
    std::vector<double> back = detail::single_source(g, z, true);
    for (std::size_t x = 0; x < V; ++x) out[x] += back[x];
    out[z] = 0;
    partial[k] = std::move(out);
  });
  std::vector<double> diag(V, kInf);
  for (const auto& p : partial)
    for (std::size_t x = 0; x < V; ++x) diag[x] = std::min(diag[x], p[x]);
  return diag;
}

}  // namespace wkam
