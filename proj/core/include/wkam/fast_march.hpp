#pragma once

#include <vector>

#include "wkam/grid.hpp"
#include "wkam/model.hpp"

namespace wkam {

struct FastMarchResult {
  ScalarField distance;
  std::vector<std::size_t> accepted;  // nodes in acceptance order
};

// First-order upwind fast marching for ‖∇φ‖ = √(2(U + alpha)) on the periodic
// grid, φ(source) = 0. Mechanical models only.
FastMarchResult fast_march_jacobi(const LagrangianModel& model, double alpha, std::size_t source);

}  // namespace wkam
