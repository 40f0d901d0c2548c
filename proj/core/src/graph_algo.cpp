#include "graph_algo.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <queue>

#include "wkam/error.hpp"

namespace wkam::detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

std::optional<Cycle> parent_cycle(const ActionGraph& g, const std::vector<std::size_t>& pnode,
                                  const std::vector<std::size_t>& pedge) {
  const std::size_t V = g.node_count();
  std::vector<std::size_t> stamp(V, kNone);
  for (std::size_t s = 0; s < V; ++s) {
    std::size_t x = s;
    while (x != kNone && stamp[x] == kNone) {
      stamp[x] = s;
      x = pnode[x];
    }
    if (x == kNone || stamp[x] != s) continue;
    Cycle c;
    std::size_t y = x;
    do {
      c.nodes.push_back(pnode[y]);
      c.edges.push_back(pedge[y]);
      y = pnode[y];
    } while (y != x);
    std::reverse(c.nodes.begin(), c.nodes.end());
    std::reverse(c.edges.begin(), c.edges.end());
    return c;
  }
  return std::nullopt;
}

}  // namespace

PotentialResult feasible_potential(const ActionGraph& g, double eps) {
  const std::size_t V = g.node_count();
  const std::size_t S = g.degree();
  for (std::size_t x = 0; x < V; ++x)
    if (g.stationary[x] < -eps) return {{}, Cycle{{x}, {kStationaryEdge}}};
  std::vector<double> dist(V, 0.0);
  if (!g.has_negative_weights) return {dist, std::nullopt};
  std::vector<std::size_t> pnode(V, kNone), pedge(V, kNone), count(V, 0);
  std::vector<char> inq(V, 1);
  std::deque<std::size_t> q;
  for (std::size_t x = 0; x < V; ++x) q.push_back(x);
  while (!q.empty()) {
    std::size_t x = q.front();
    q.pop_front();
    inq[x] = 0;
    for (std::size_t s = 0; s < S; ++s) {
      std::size_t y = g.target(x, s);
      double nd = dist[x] + g.weight(x, s);
      if (nd < dist[y] - eps * (1 + std::abs(dist[y]))) {
        dist[y] = nd;
        pnode[y] = x;
        pedge[y] = s;
        if (++count[y] % V == 0) {
          if (auto c = parent_cycle(g, pnode, pedge)) return {{}, c};
        }
        if (!inq[y]) {
          inq[y] = 1;
          q.push_back(y);
        }
      }
    }
  }
  return {dist, std::nullopt};
}

std::vector<std::size_t> tight_cycle_nodes(const ActionGraph& g, const std::vector<double>& pot, double tol) {
  const std::size_t V = g.node_count();
  const std::size_t S = g.degree();
  auto tight = [&](std::size_t x, std::size_t s) {
    return g.weight(x, s) + pot[x] - pot[g.target(x, s)] <= tol;
  };
  // Iterative Tarjan.
  std::vector<std::size_t> index(V, kNone), low(V, 0), comp(V, kNone), stack;
  std::vector<char> on_stack(V, 0);
  std::vector<std::pair<std::size_t, std::size_t>> call;
  std::size_t counter = 0, ncomp = 0;
  std::vector<std::size_t> comp_size;
  for (std::size_t root = 0; root < V; ++root) {
    if (index[root] != kNone) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [x, s] = call.back();
      if (s < S) {
        std::size_t e = s++;
        if (!tight(x, e)) continue;
        std::size_t y = g.target(x, e);
        if (index[y] == kNone) {
          index[y] = low[y] = counter++;
          stack.push_back(y);
          on_stack[y] = 1;
          call.push_back({y, 0});
        } else if (on_stack[y]) {
          low[x] = std::min(low[x], index[y]);
        }
        continue;
      }
      std::size_t done = x;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::size_t size = 0, y;
        do {
          y = stack.back();
          stack.pop_back();
          on_stack[y] = 0;
          comp[y] = ncomp;
          ++size;
        } while (y != done);
        comp_size.push_back(size);
        ++ncomp;
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < V; ++x)
    if (comp_size[comp[x]] >= 2 || g.stationary[x] <= tol) out.push_back(x);
  return out;
}

Cycle tight_cycle_through(const ActionGraph& g, const std::vector<double>& pot, double tol, std::size_t start) {
  if (g.stationary[start] <= tol) return Cycle{{start}, {kStationaryEdge}};
  const std::size_t V = g.node_count();
  const std::size_t S = g.degree();
  std::vector<std::size_t> pnode(V, kNone), pedge(V, kNone);
  std::vector<char> seen(V, 0);
  std::deque<std::size_t> q{start};
  seen[start] = 1;
  while (!q.empty()) {
    std::size_t x = q.front();
    q.pop_front();
    for (std::size_t s = 0; s < S; ++s) {
      if (g.weight(x, s) + pot[x] - pot[g.target(x, s)] > tol) continue;
      std::size_t y = g.target(x, s);
      if (y == start) {
        Cycle c;
        c.nodes.push_back(x);
        c.edges.push_back(s);
        for (std::size_t z = x; z != start; z = pnode[z]) {
          c.nodes.push_back(pnode[z]);
          c.edges.push_back(pedge[z]);
        }
        std::reverse(c.nodes.begin(), c.nodes.end());
        std::reverse(c.edges.begin(), c.edges.end());
        return c;
      }
      if (!seen[y]) {
        seen[y] = 1;
        pnode[y] = x;
        pedge[y] = s;
        q.push_back(y);
      }
    }
  }
  throw NumericalInconsistency("node " + std::to_string(start) + " lies on no tight cycle");
}

std::vector<double> single_source(const ActionGraph& g, std::size_t src, bool reverse) {
  const std::size_t V = g.node_count();
  const std::size_t S = g.degree();
  std::vector<double> dist(V, kInf);
  dist[src] = 0;
  auto neighbor = [&](std::size_t x, std::size_t s) -> std::pair<std::size_t, double> {
    if (!reverse) return {g.target(x, s), g.weight(x, s)};
    std::size_t p = g.source(x, s);
    return {p, g.weight(p, s)};
  };
  if (!g.has_negative_weights) {
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0.0, src});
    std::vector<char> done(V, 0);
    while (!pq.empty()) {
      auto [d, x] = pq.top();
      pq.pop();
      if (done[x]) continue;
      done[x] = 1;
      for (std::size_t s = 0; s < S; ++s) {
        auto [y, w] = neighbor(x, s);
        if (d + w < dist[y]) {
          dist[y] = d + w;
          pq.push({dist[y], y});
        }
      }
    }
    return dist;
  }
  std::vector<std::size_t> count(V, 0);
  std::vector<char> inq(V, 0);
  std::deque<std::size_t> q{src};
  inq[src] = 1;
  while (!q.empty()) {
    std::size_t x = q.front();
    q.pop_front();
    inq[x] = 0;
    for (std::size_t s = 0; s < S; ++s) {
      auto [y, w] = neighbor(x, s);
      double nd = dist[x] + w;
      if (nd < dist[y] - 1e-13 * (1 + std::abs(nd))) {
        dist[y] = nd;
        if (++count[y] > V)
          throw NumericalInconsistency("negative cycle reachable from node " + std::to_string(src) +
                                       ": level alpha is sub-critical");
        if (!inq[y]) {
          inq[y] = 1;
          q.push_back(y);
        }
      }
    }
  }
  return dist;
}

}  // namespace wkam::detail
