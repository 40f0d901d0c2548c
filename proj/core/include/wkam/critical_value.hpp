#pragma once

#include <cstdint>
#include <vector>

#include "wkam/action_graph.hpp"
#include "wkam/model.hpp"

namespace wkam {

enum class CriticalMethod { closed_form, ratio_cycle, minplus };

const char* to_string(CriticalMethod m);

inline constexpr std::size_t kStationaryEdge = SIZE_MAX;

// A closed walk in the action graph: edges[i] is the offset index taken from
// nodes[i] (kStationaryEdge for the stationary self-loop).
struct Cycle {
  std::vector<std::size_t> nodes;
  std::vector<std::size_t> edges;
};

struct CriticalValue {
  double alpha = 0;
  CriticalMethod method = CriticalMethod::closed_form;
  Cycle certificate;
  double certificate_cost = 0;  // Lagrangian action along the certificate
  double certificate_time = 0;
  double bracket_lo = 0;
  double bracket_hi = 0;
  int iterations = 0;

  double certificate_ratio() const { return certificate_cost / certificate_time; }
};

CriticalValue critical_value_closed_form(const LagrangianModel& model);
CriticalValue critical_value_ratio_cycle(const LagrangianModel& model, StencilKind stencil = StencilKind::standard,
                                         double tol = 1e-9);
CriticalValue critical_value_minplus(const LagrangianModel& model, StencilKind stencil = StencilKind::standard,
                                     double tol = 1e-9);

// Action and time of a cycle at level k with per-edge optimal times
// τ = ‖Δ‖/√(2(Ū+k)).
struct CycleAction {
  double cost = 0;
  double time = 0;
};
CycleAction cycle_action(const LagrangianModel& model, const std::vector<Coord>& offsets, const Cycle& cycle,
                         double k);

// Minimum cycle mean (per edge, stationary loops included) of the one-step
// min-plus matrix of `graph`, by Karp's recurrence.
double min_cycle_mean(const ActionGraph& graph);

}  // namespace wkam
