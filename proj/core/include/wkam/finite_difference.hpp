#pragma once

#include <utility>
#include <vector>

#include "wkam/grid.hpp"

namespace wkam {

// Central second-order stencil for the m-th derivative: (offset, weight)
// pairs, to be divided by spacing^m.
std::vector<std::pair<int, double>> central_stencil(int order);
int stencil_radius(int order);

// Mixed partial ∂^alpha u at a node via tensor-product central stencils.
double fd_derivative(const ScalarField& u, std::size_t node, const Coord& alpha);

// Sum of |weights| of the tensor stencil; used for round-off floors.
double fd_weight_mass(const Coord& alpha, int d);

}  // namespace wkam
