#pragma once

#include <span>
#include <vector>

#include "wkam/action_graph.hpp"
#include "wkam/aubry.hpp"
#include "wkam/barrier.hpp"
#include "wkam/model.hpp"

namespace wkam {

struct Subsolution {
  ScalarField u;
  std::size_t source = 0;
  double alpha = 0;
  double max_violation = 0;  // max over edges of u(y) − u(x) − w(x,y)
};

double domination_violation(const ScalarField& u, const ActionGraph& graph);

// u = h(z, ·); throws NumericalInconsistency when edge domination fails by
// more than 1e-6.
Subsolution barrier_subsolution(const BarrierMatrix& h, const ActionGraph& graph, std::size_t z);

struct ResidualReport {
  ScalarField residual;  // H_η(x, ∇u) − alpha per node
  double max = 0;
  double q50 = 0, q90 = 0, q99 = 0;
  double constant = 0;   // max / spacing
};

ResidualReport verify_subsolution(const ScalarField& u, const LagrangianModel& model, double alpha);

struct RepresentationReport {
  double max_gap = 0;        // h(x,y) − max_u (u(y) − u(x)) over Aubry sources x
  double max_violation = 0;  // max over samples of u(y) − u(x) − h(x,y)
  std::size_t pairs = 0;
  bool attained = false;     // max_gap ≤ 1e-6
};

// Sample family: rows h(z, ·) for z in `sample_sources`, plus constants when
// requested.
RepresentationReport representation_check(const BarrierMatrix& h, const AubrySet& aubry,
                                          std::span<const std::size_t> sample_sources, bool include_constants);

struct DifferenceFunction {
  ScalarField w;
  std::vector<char> critical;  // ‖∇w‖ ≤ kappa·spacing
  double kappa = 4.0;
  double edge_lipschitz = 0;   // max over axis edges |Δw| / spacing
};

DifferenceFunction difference(const ScalarField& u, const ScalarField& v, double kappa = 4.0);

struct EvaluationMap {
  std::vector<double> values;  // w at the class representative
  std::vector<double> spread;  // max − min of w over class members
  double budget = 0;           // tol_class · (1 + edge Lipschitz constant)
  double lipschitz_excess = 0; // max |φ(p) − φ(q)| − δ̄(p,q) − 2·tol_class
  bool lipschitz_ok = true;
};

EvaluationMap evaluation_map(const DifferenceFunction& w, const QuotientSpace& q);

struct MorseSardEstimate {
  double bound = 0;
  std::size_t critical_nodes = 0;
  std::size_t cells = 0;
};

// Union length of [min w, max w] over the 2^d-corner cells that touch the
// critical mask.
MorseSardEstimate morse_sard_estimate(const DifferenceFunction& w);

}  // namespace wkam
