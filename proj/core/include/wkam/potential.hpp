#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "wkam/grid.hpp"

namespace wkam {

struct ZeroPotential {
  bool operator==(const ZeroPotential&) const = default;
};

// amplitude * cos(2π k·x + phase)
struct TrigTerm {
  double amplitude = 0;
  Coord wavevector{0, 0, 0};
  double phase = 0;
  bool operator==(const TrigTerm&) const = default;
};

struct TrigPotential {
  double offset = 0;
  std::vector<TrigTerm> terms;
  bool operator==(const TrigPotential&) const = default;
};

// U = height · Π_k (1 − exp(−s_k/width²)), s_k = Σ_i sin²(π(x_i − c_{k,i})).
struct TwoWellPotential {
  std::array<Point, 2> centers{Point{0.25, 0.5, 0.5}, Point{0.75, 0.5, 0.5}};
  double width = 0.2;
  double height = 1.0;
  bool operator==(const TwoWellPotential&) const = default;
};

// d = 1 only. Zero exactly at the (snapped) endpoints of the level-k intervals
// of a middle-thirds construction on [base_lo, base_hi]; between consecutive
// zeros a, b the profile is ((x−a)(b−x)/g)^(s+1), g = b − a.
struct CantorFlatPotential {
  int level = 3;
  int flat_order = 1;
  double base_lo = 0.125;
  double base_hi = 0.875;
  bool operator==(const CantorFlatPotential&) const = default;
};

// U = amplitude · (Σ_i sin²(π(x_i − c_i)))^((s+1)/2). With `hyperplane` only
// axis 0 enters, so U vanishes on {x_0 = c_0}.
struct FlatProfilePotential {
  int flat_order = 1;
  Point center{0, 0, 0};
  double amplitude = 1.0;
  bool hyperplane = false;
  bool operator==(const FlatProfilePotential&) const = default;
};

using PotentialSpec =
    std::variant<ZeroPotential, TrigPotential, TwoWellPotential, CantorFlatPotential, FlatProfilePotential>;

std::string family_name(const PotentialSpec& spec);

ScalarField sample_potential(const PotentialSpec& spec, const PeriodicGrid& grid);

// Node indices of the snapped Cantor endpoints, sorted.
std::vector<std::size_t> cantor_zero_nodes(const CantorFlatPotential& spec, const PeriodicGrid& grid);

}  // namespace wkam
