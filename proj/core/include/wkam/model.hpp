#pragma once

#include <vector>

#include "wkam/grid.hpp"

namespace wkam {

// η = Σ c_i dx_i + df on T^d.
struct ClosedOneForm {
  std::vector<double> c;
  ScalarField f;

  // Discrete line integral of η along the i-th fundamental loop through node 0.
  double loop_integral(int axis) const;
  // ⟨η, Δ⟩ integrated along the lattice edge from node x by offset `delta`.
  double edge_integral(std::size_t x, const Coord& delta) const;
  bool is_zero() const;
};

ClosedOneForm closed_form(std::vector<double> c, ScalarField f);
ClosedOneForm zero_form(const PeriodicGrid& grid);

enum class ModelKind { mechanical, symmetric_quadratic, linear_drift };

const char* to_string(ModelKind kind);

// The computational Lagrangian is L_η(x,v) = ½‖v‖² + U(x) − ⟨η(x), v⟩ with
// Hamiltonian H_η(x,p) = ½‖p + η(x)‖² − U(x). For linear_drift, η is also the
// fibre derivative ∂L/∂v(x,0) of the underlying Lagrangian, so the model is
// posed at its own Liouville class.
struct LagrangianModel {
  ModelKind kind = ModelKind::mechanical;
  ScalarField potential;
  ClosedOneForm eta;
  double gamma = 1.0;

  const PeriodicGrid& grid() const { return potential.grid(); }
};

LagrangianModel make_model(ModelKind kind, ScalarField potential, ClosedOneForm eta, double gamma = 1.0);
LagrangianModel mechanical_model(ScalarField potential);

std::vector<double> liouville_class(const LagrangianModel& model);

using VectorField = std::vector<Point>;

// Centered periodic differences, second order.
VectorField gradient_fd(const ScalarField& u);

// η evaluated at nodes: c + ∇f (centered differences).
VectorField form_at_nodes(const ClosedOneForm& eta);

}  // namespace wkam
