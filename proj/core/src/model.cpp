#include "wkam/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wkam {

double ClosedOneForm::edge_integral(std::size_t x, const Coord& delta) const {
  const PeriodicGrid& g = f.grid();
  double acc = 0;
  for (int i = 0; i < g.dim(); ++i) acc += c[i] * delta[i] * g.spacing();
  return acc + f[g.shifted(x, delta)] - f[x];
}

double ClosedOneForm::loop_integral(int axis) const {
  const PeriodicGrid& g = f.grid();
  if (axis < 0 || axis >= g.dim()) throw std::invalid_argument("loop axis out of range");
  Coord e{0, 0, 0};
  e[axis] = 1;
  double acc = 0;
  std::size_t node = 0;
  for (int j = 0; j < g.n(); ++j) {
    acc += edge_integral(node, e);
    node = g.shifted(node, e);
  }
  return acc;
}

bool ClosedOneForm::is_zero() const {
  for (double ci : c)
    if (ci != 0) return false;
  return f.size() == 0 || f.min() == f.max();
}

ClosedOneForm closed_form(std::vector<double> c, ScalarField f) {
  if (static_cast<int>(c.size()) != f.grid().dim())
    throw std::invalid_argument("closed form class has " + std::to_string(c.size()) + " components on a " +
                                std::to_string(f.grid().dim()) + "-dimensional grid");
  return ClosedOneForm{std::move(c), std::move(f)};
}

ClosedOneForm zero_form(const PeriodicGrid& grid) {
  return ClosedOneForm{std::vector<double>(grid.dim(), 0.0), ScalarField(grid, 0.0)};
}

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::mechanical: return "mechanical";
    case ModelKind::symmetric_quadratic: return "symmetric_quadratic";
    case ModelKind::linear_drift: return "linear_drift";
  }
  return "?";
}

LagrangianModel make_model(ModelKind kind, ScalarField potential, ClosedOneForm eta, double gamma) {
  if (!(gamma > 0)) throw std::invalid_argument("convexity modulus gamma must be positive");
  if (!(eta.f.grid() == potential.grid()) || static_cast<int>(eta.c.size()) != potential.grid().dim())
    throw std::invalid_argument("closed form and potential live on different grids");
  if (kind != ModelKind::linear_drift && !eta.is_zero())
    throw std::invalid_argument(std::string(to_string(kind)) + " model requires a zero 1-form");
  return LagrangianModel{kind, std::move(potential), std::move(eta), gamma};
}

LagrangianModel mechanical_model(ScalarField potential) {
  ClosedOneForm eta = zero_form(potential.grid());
  return make_model(ModelKind::mechanical, std::move(potential), std::move(eta));
}

std::vector<double> liouville_class(const LagrangianModel& model) {
  if (model.kind == ModelKind::linear_drift) return model.eta.c;
  return std::vector<double>(model.grid().dim(), 0.0);
}

VectorField gradient_fd(const ScalarField& u) {
  const PeriodicGrid& g = u.grid();
  VectorField out(g.size(), Point{0, 0, 0});
  double inv = 0.5 / g.spacing();
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (int a = 0; a < g.dim(); ++a) {
      Coord e{0, 0, 0};
      e[a] = 1;
      Coord m{0, 0, 0};
      m[a] = -1;
      out[i][a] = (u[g.shifted(i, e)] - u[g.shifted(i, m)]) * inv;
    }
  }
  return out;
}

VectorField form_at_nodes(const ClosedOneForm& eta) {
  VectorField out = gradient_fd(eta.f);
  for (auto& p : out)
    for (std::size_t a = 0; a < eta.c.size(); ++a) p[a] += eta.c[a];
  return out;
}

}  // namespace wkam
