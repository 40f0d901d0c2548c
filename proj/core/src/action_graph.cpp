#include "wkam/action_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "wkam/error.hpp"

namespace wkam {

StencilKind parse_stencil(const std::string& name) {
  if (name == "nearest") return StencilKind::nearest;
  if (name == "standard" || name == "default") return StencilKind::standard;
  if (name == "extended") return StencilKind::extended;
  throw std::invalid_argument("unknown stencil '" + name + "'");
}

const char* to_string(StencilKind kind) {
  switch (kind) {
    case StencilKind::nearest: return "nearest";
    case StencilKind::standard: return "standard";
    case StencilKind::extended: return "extended";
  }
  return "?";
}

std::vector<Coord> make_stencil(int d, StencilKind kind) {
  int reach = kind == StencilKind::extended ? 2 : 1;
  std::vector<Coord> out;
  Coord c{0, 0, 0};
  auto visit = [&](auto&& self, int axis) -> void {
    if (axis == d) {
      int nonzero = 0, g = 0;
      for (int i = 0; i < d; ++i) {
        nonzero += c[i] != 0;
        g = std::gcd(g, std::abs(c[i]));
      }
      if (nonzero == 0 || g != 1) return;
      if (kind == StencilKind::nearest && nonzero != 1) return;
      out.push_back(c);
      return;
    }
    for (int v = -reach; v <= reach; ++v) {
      c[axis] = v;
      self(self, axis + 1);
    }
    c[axis] = 0;
  };
  visit(visit, 0);
  return out;
}

double ActionGraph::max_weight() const { return *std::max_element(weights.begin(), weights.end()); }

double ActionGraph::min_edge_length() const { return *std::min_element(edge_length.begin(), edge_length.end()); }

ActionGraph build_action_graph(const LagrangianModel& model, double alpha, StencilKind stencil) {
  const PeriodicGrid& g = model.grid();
  const ScalarField& U = model.potential;
  ActionGraph G;
  G.grid = g;
  G.alpha = alpha;
  G.offsets = make_stencil(g.dim(), stencil);
  const std::size_t S = G.offsets.size();
  G.reverse.resize(S);
  for (std::size_t s = 0; s < S; ++s) {
    double len2 = 0;
    for (int a = 0; a < g.dim(); ++a) len2 += std::pow(G.offsets[s][a] * g.spacing(), 2);
    G.edge_length.push_back(std::sqrt(len2));
    for (std::size_t t = 0; t < S; ++t) {
      bool opposite = true;
      for (int a = 0; a < kMaxDim; ++a) opposite &= G.offsets[t][a] == -G.offsets[s][a];
      if (opposite) G.reverse[s] = t;
    }
  }
  G.weights.resize(g.size() * S);
  G.targets.resize(g.size() * S);
  G.stationary.resize(g.size());
  bool drift = !model.eta.is_zero();
  for (std::size_t x = 0; x < g.size(); ++x) {
    G.stationary[x] = U[x] + alpha;
    for (std::size_t s = 0; s < S; ++s) {
      std::size_t y = g.shifted(x, G.offsets[s]);
      double rad = 0.5 * (U[x] + U[y]) + alpha;
      if (rad < -1e-6) {
        std::ostringstream msg;
        msg << "level alpha=" << alpha << " is sub-critical: radicand " << rad << " on edge " << x << "->" << y;
        throw NumericalInconsistency(msg.str());
      }
      double w = G.edge_length[s] * std::sqrt(2 * std::max(0.0, rad));
      if (drift) w -= model.eta.edge_integral(x, G.offsets[s]);
      G.weights[x * S + s] = w;
      G.targets[x * S + s] = y;
      if (w < 0) G.has_negative_weights = true;
    }
  }
  return G;
}

}  // namespace wkam
