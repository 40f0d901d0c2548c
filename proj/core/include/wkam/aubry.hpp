#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wkam/barrier.hpp"
#include "wkam/grid.hpp"

namespace wkam {

// δ(x,y) = h(x,y) + h(y,x) on the source nodes of a peierls matrix.
struct Pseudometric {
  std::vector<std::size_t> nodes;
  std::vector<double> values;  // nodes.size() squared, row-major
  double tolerance = 1e-9;

  std::size_t size() const { return nodes.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * nodes.size() + j]; }
  std::size_t position(std::size_t node) const;
};

Pseudometric delta_pseudometric(const BarrierMatrix& h);

struct AubrySet {
  std::vector<std::size_t> nodes;
  double tolerance = 0;
  std::vector<double> residual;  // h(x,x) per grid node, NaN where not computed
  double min_residual_outside = 0;
  // Containment against {U = min U}: members where U exceeds its minimum by
  // more than the tolerance scale (reported, not enforced).
  std::vector<std::size_t> outside_min_set;

  bool contains(std::size_t node) const;
};

// 8·spacing²·max√(2(U+α)), floored at 1e-9.
double default_tol_aubry(const ScalarField& potential, double alpha);

AubrySet aubry_set(const BarrierMatrix& h, double tol_aubry, const ScalarField* potential = nullptr);
AubrySet aubry_set_from_diagonal(const PeriodicGrid& grid, std::span<const double> diagonal, double tol_aubry,
                                 const ScalarField* potential = nullptr);

struct QuotientSpace {
  std::vector<std::vector<std::size_t>> classes;  // grid nodes, ascending
  std::vector<std::size_t> representatives;       // smallest member
  std::vector<double> delta_bar;                  // classes² row-major
  std::vector<double> spread;                     // max − min of δ over member pairs
  double tol_class = 0;

  std::size_t size() const { return classes.size(); }
  double at(std::size_t p, std::size_t q) const { return delta_bar[p * classes.size() + q]; }
  double spread_at(std::size_t p, std::size_t q) const { return spread[p * classes.size() + q]; }
  std::size_t class_of(std::size_t node) const;
};

QuotientSpace quotient(const Pseudometric& delta, const AubrySet& aubry, double tol_class);

struct ComponentRung {
  double epsilon = 0;
  std::size_t components = 0;
  double max_diameter = 0;
  std::vector<std::size_t> membership;  // component id per class
};

struct ComponentReport {
  std::vector<ComponentRung> rungs;
  // Largest ladder value r with max diameter ≤ 2ε for every rung ε ≤ r.
  std::optional<double> disconnected_at;
};

ComponentRung epsilon_components(const QuotientSpace& q, double epsilon);
std::vector<double> default_epsilon_ladder(const QuotientSpace& q, int rungs = 16);
ComponentReport disconnectedness_scan(const QuotientSpace& q, std::span<const double> ladder);

}  // namespace wkam
