#include "wkam/critical_value.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "graph_algo.hpp"
#include "wkam/error.hpp"

namespace wkam {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cycle_level_cost(const LagrangianModel& m, const std::vector<Coord>& offsets, const Cycle& c, double k) {
  const PeriodicGrid& g = m.grid();
  const ScalarField& U = m.potential;
  double acc = 0;
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    std::size_t x = c.nodes[i];
    if (c.edges[i] == kStationaryEdge) {
      acc += U[x] + k;
      continue;
    }
    const Coord& o = offsets[c.edges[i]];
    double len2 = 0;
    for (int a = 0; a < g.dim(); ++a) len2 += std::pow(o[a] * g.spacing(), 2);
    double ubar = 0.5 * (U[x] + U[g.shifted(x, o)]);
    acc += std::sqrt(len2) * std::sqrt(2 * std::max(0.0, ubar + k)) - m.eta.edge_integral(x, o);
  }
  return acc;
}

// Largest root of the increasing function k ↦ cost of cycle c at level k,
// within [lo, hi].
double cycle_root(const LagrangianModel& m, const std::vector<Coord>& offsets, const Cycle& c, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1 + std::abs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    (cycle_level_cost(m, offsets, c, mid) < 0 ? lo : hi) = mid;
  }
  return hi;
}

struct Bracket {
  double lo, hi;
};

double max_class_norm(const LagrangianModel& m) {
  double best = 0;
  for (const Point& p : form_at_nodes(m.eta)) {
    double s = 0;
    for (int a = 0; a < m.grid().dim(); ++a) s += p[a] * p[a];
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

template <class Feasible>
Bracket search_bracket(const LagrangianModel& m, Feasible&& feasible) {
  double minU = m.potential.min(), maxU = m.potential.max();
  double cmax = 0;
  for (double c : m.eta.c) cmax = std::max(cmax, std::abs(c));
  Bracket b{-maxU - 0.5 * cmax * cmax - 1, -minU + 1};
  if (feasible(b.hi)) return b;
  double eta_max = max_class_norm(m);
  double step = 0.5 * eta_max * eta_max + 1;
  for (int i = 0; i < 60; ++i) {
    double hi = -minU + step;
    if (feasible(hi)) return {b.lo, hi};
    step *= 2;
  }
  std::ostringstream msg;
  msg << "critical value bracket failure: no feasible level found in [" << b.lo << ", " << -minU + step << "]";
  throw std::runtime_error(msg.str());
}

void attach_certificate(CriticalValue& cv, const LagrangianModel& m, const std::vector<Coord>& offsets) {
  CycleAction a = cycle_action(m, offsets, cv.certificate, cv.alpha);
  cv.certificate_cost = a.cost;
  cv.certificate_time = a.time;
}

std::size_t argmin_node(const ScalarField& U) { return U.argmin(); }

}  // namespace

const char* to_string(CriticalMethod m) {
  switch (m) {
    case CriticalMethod::closed_form: return "closed_form";
    case CriticalMethod::ratio_cycle: return "ratio_cycle";
    case CriticalMethod::minplus: return "minplus";
  }
  return "?";
}

CycleAction cycle_action(const LagrangianModel& m, const std::vector<Coord>& offsets, const Cycle& c, double k) {
  const PeriodicGrid& g = m.grid();
  const ScalarField& U = m.potential;
  CycleAction out;
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    std::size_t x = c.nodes[i];
    if (c.edges[i] == kStationaryEdge) {
      out.cost += U[x];
      out.time += 1;
      continue;
    }
    const Coord& o = offsets[c.edges[i]];
    double len2 = 0;
    for (int a = 0; a < g.dim(); ++a) len2 += std::pow(o[a] * g.spacing(), 2);
    double ubar = 0.5 * (U[x] + U[g.shifted(x, o)]);
    double rad = ubar + k;
    if (rad <= 0) return {kInf, kInf};
    double tau = std::sqrt(len2) / std::sqrt(2 * rad);
    out.cost += len2 / (2 * tau) + tau * ubar - m.eta.edge_integral(x, o);
    out.time += tau;
  }
  return out;
}

CriticalValue critical_value_closed_form(const LagrangianModel& model) {
  CriticalValue cv;
  cv.method = CriticalMethod::closed_form;
  std::size_t z = argmin_node(model.potential);
  cv.alpha = 0.0 - model.potential[z];
  cv.certificate = Cycle{{z}, {kStationaryEdge}};
  cv.certificate_cost = model.potential[z];
  cv.certificate_time = 1;
  cv.bracket_lo = cv.bracket_hi = cv.alpha;
  return cv;
}

CriticalValue critical_value_ratio_cycle(const LagrangianModel& model, StencilKind stencil, double tol) {
  const std::vector<Coord> offsets = make_stencil(model.grid().dim(), stencil);
  const double minU = model.potential.min();
  auto negative_cycle = [&](double k) -> std::optional<Cycle> {
    if (k < -minU) return Cycle{{argmin_node(model.potential)}, {kStationaryEdge}};
    ActionGraph g = build_action_graph(model, k, stencil);
    return detail::feasible_potential(g).negative_cycle;
  };
  CriticalValue cv;
  cv.method = CriticalMethod::ratio_cycle;
  Bracket b = search_bracket(model, [&](double k) { return !negative_cycle(k); });
  cv.bracket_lo = b.lo;
  cv.bracket_hi = b.hi;

  double lo = -minU, hi = b.hi;
  std::optional<Cycle> c = negative_cycle(lo);
  if (!c) {
    cv.alpha = lo;
    cv.certificate = Cycle{{argmin_node(model.potential)}, {kStationaryEdge}};
    attach_certificate(cv, model, offsets);
    return cv;
  }
  // Each negative cycle is pushed to its own zero level; the level only grows
  // and stops at the first cycle whose root admits no further negative cycle.
  for (int it = 0; it < 200; ++it) {
    cv.iterations = it + 1;
    double r = cycle_root(model, offsets, *c, lo, hi);
    std::optional<Cycle> next = negative_cycle(r);
    if (!next) {
      cv.alpha = r;
      cv.certificate = *c;
      attach_certificate(cv, model, offsets);
      return cv;
    }
    lo = r;
    c = next;
  }
  while (hi - lo > tol) {
    ++cv.iterations;
    double mid = 0.5 * (lo + hi);
    if (auto next = negative_cycle(mid)) {
      lo = mid;
      c = next;
    } else {
      hi = mid;
    }
  }
  cv.alpha = hi;
  cv.certificate = *c;
  attach_certificate(cv, model, offsets);
  return cv;
}

double min_cycle_mean(const ActionGraph& g) {
  const std::size_t V = g.node_count();
  const std::size_t S = g.degree();
  if (V > 4096) throw std::invalid_argument("min-plus critical level is limited to 4096 nodes");
  std::vector<double> D((V + 1) * V, kInf);
  std::fill(D.begin(), D.begin() + V, 0.0);
  for (std::size_t j = 1; j <= V; ++j) {
    const double* prev = &D[(j - 1) * V];
    double* cur = &D[j * V];
    for (std::size_t y = 0; y < V; ++y) {
      double best = prev[y] + g.stationary[y];
      for (std::size_t s = 0; s < S; ++s) {
        std::size_t x = g.source(y, s);
        best = std::min(best, prev[x] + g.weight(x, s));
      }
      cur[y] = best;
    }
  }
  double lambda = kInf;
  for (std::size_t v = 0; v < V; ++v) {
    double worst = -kInf;
    for (std::size_t j = 0; j < V; ++j)
      worst = std::max(worst, (D[V * V + v] - D[j * V + v]) / static_cast<double>(V - j));
    lambda = std::min(lambda, worst);
  }
  return lambda;
}

CriticalValue critical_value_minplus(const LagrangianModel& model, StencilKind stencil, double tol) {
  const double minU = model.potential.min();
  auto feasible = [&](double k) {
    if (k < -minU) return false;
    return min_cycle_mean(build_action_graph(model, k, stencil)) >= -1e-14;
  };
  CriticalValue cv;
  cv.method = CriticalMethod::minplus;
  Bracket b = search_bracket(model, feasible);
  cv.bracket_lo = b.lo;
  cv.bracket_hi = b.hi;
  double lo = -minU, hi = b.hi;
  if (feasible(lo)) {
    hi = lo;
  } else {
    while (hi - lo > tol * 1e-2) {
      ++cv.iterations;
      double mid = 0.5 * (lo + hi);
      (feasible(mid) ? hi : lo) = mid;
    }
  }
  cv.alpha = hi;
  ActionGraph g = build_action_graph(model, hi, stencil);
  auto pot = detail::feasible_potential(g);
  if (pot.negative_cycle) throw NumericalInconsistency("min-plus critical level admits a negative cycle");
  double tight = 1e-8 * (1 + std::abs(g.max_weight()));
  std::vector<std::size_t> nodes = detail::tight_cycle_nodes(g, pot.potential, tight);
  if (!nodes.empty()) {
    cv.certificate = detail::tight_cycle_through(g, pot.potential, tight, nodes.front());
    attach_certificate(cv, model, g.offsets);
  }
  return cv;
}

}  // namespace wkam
