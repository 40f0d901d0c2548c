#include "wkam/finite_difference.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace wkam {

std::vector<std::pair<int, double>> central_stencil(int order) {
  if (order < 0) throw std::invalid_argument("negative derivative order");
  std::map<int, double> w{{0, 1.0}};
  auto convolve = [&](const std::map<int, double>& k) {
    std::map<int, double> out;
    for (auto [a, wa] : w)
      for (auto [b, wb] : k) out[a + b] += wa * wb;
    w.swap(out);
  };
  for (int i = 0; i < order / 2; ++i) convolve({{-1, 1.0}, {0, -2.0}, {1, 1.0}});
  if (order % 2) convolve({{-1, -0.5}, {1, 0.5}});
  std::vector<std::pair<int, double>> out;
  for (auto [k, v] : w)
    if (v != 0) out.push_back({k, v});
  return out;
}

int stencil_radius(int order) { return (order + 1) / 2; }

double fd_derivative(const ScalarField& u, std::size_t node, const Coord& alpha) {
  const PeriodicGrid& g = u.grid();
  const int d = g.dim();
  std::vector<std::pair<int, double>> st[kMaxDim];
  double scale = 1;
  for (int a = 0; a < d; ++a) {
    st[a] = central_stencil(alpha[a]);
    scale *= std::pow(g.spacing(), -alpha[a]);
  }
  for (int a = d; a < kMaxDim; ++a) st[a] = {{0, 1.0}};
  double acc = 0;
  for (auto [o0, w0] : st[0])
    for (auto [o1, w1] : st[1])
      for (auto [o2, w2] : st[2]) acc += w0 * w1 * w2 * u[g.shifted(node, Coord{o0, o1, o2})];
  return acc * scale;
}

double fd_weight_mass(const Coord& alpha, int d) {
  double m = 1;
  for (int a = 0; a < d; ++a) {
    double s = 0;
    for (auto [o, w] : central_stencil(alpha[a])) s += std::abs(w);
    m *= s;
  }
  return m;
}

}  // namespace wkam
