#pragma once

#include <vector>

#include "wkam/grid.hpp"

namespace wkam::detail {

// All multi-indices of total order k in d variables.
inline std::vector<Coord> multi_indices(int d, int k) {
  std::vector<Coord> out;
  Coord c{0, 0, 0};
  auto rec = [&](auto&& self, int axis, int left) -> void {
    if (axis == d - 1) {
      c[axis] = left;
      out.push_back(c);
      c[axis] = 0;
      return;
    }
    for (int v = left; v >= 0; --v) {
      c[axis] = v;
      self(self, axis + 1, left - v);
    }
    c[axis] = 0;
  };
  rec(rec, 0, k);
  return out;
}

}  // namespace wkam::detail
