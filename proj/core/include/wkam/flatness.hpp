#pragma once

#include <span>
#include <vector>

#include "wkam/grid.hpp"

namespace wkam {

struct FlatnessReport {
  std::vector<std::size_t> nodes;
  std::vector<int> order;          // detected s per node
  std::vector<char> next_exceeds;  // order s+1 exceeds its tolerance (false when s = s_max)
  std::vector<double> tolerance;   // θ_k for k = 0..s_max+1 (θ_0 unused)
  int s_max = 0;
};

// Largest s ≤ s_max such that every FD derivative of orders 1..s is within
// θ_k = spacing²·M_{k+2} + round-off floor, where M_{k+2} is the largest FD
// derivative of order k+2 over the grid.
FlatnessReport flatness_order(const ScalarField& U, std::span<const std::size_t> at, int s_max);

// Same, with M_{k+2} taken over the nodes where region is set.
FlatnessReport flatness_order(const ScalarField& U, std::span<const std::size_t> at, int s_max,
                              std::span<const char> region);

int max_flatness_order(const PeriodicGrid& grid);

}  // namespace wkam
