#pragma once

#include <functional>
#include <span>
#include <vector>

#include "wkam/flatness.hpp"
#include "wkam/grid.hpp"
#include "wkam/jet.hpp"
#include "wkam/whitney.hpp"

namespace wkam {

using PointMap = std::function<Point(const Point&)>;

// Jets of U∘g at each point, from FD derivatives of U at the node nearest
// g(x) (orders ≤ s dropped) composed with FD jets of g.
std::vector<Jet> composition_jets(const ScalarField& U, const PointMap& g, std::span<const Point> at, int s, int r);

struct ExtensionField {
  ScalarField F;                // zero off W₁
  std::vector<char> domain;     // W₁ nodes
  std::vector<Jet> jets;        // per anchor
  double C = 0;                 // remainder constant, 2× the measured one
  double K = 0;                 // smallest K with U∘g ≤ K·F on W₁ nodes
  double min_off_anchors = 0;   // min F over W₁ nodes off A*
  double max_on_anchors = 0;    // max |F| over A*
  bool nonnegative = false;     // ii
  bool vanishes_on_anchors = false;  // iii
  bool zero_set_matches = false;     // v
  bool dominates = false;            // vi
  FlatnessReport flatness;           // iv, anchors whose stencils stay in W₁
};

// F = Σ_j φ_j·P̂_j with P̂_j(y) = P(x_j, y) + 2C‖y − x_j‖^r. When `jets` is
// null they are computed by composition_jets. Jets are cross-checked between
// nearby anchors and rejected with the offending pair if the Taylor remainder
// ratio exceeds jet_tolerance·(1 + median jet size).
ExtensionField rough_composition_extend(const ScalarField& U, const PointMap& g, const PartitionOfUnity& pou, int s,
                                        int r, const std::vector<Jet>* jets = nullptr, double jet_tolerance = 1e3);

}  // namespace wkam
