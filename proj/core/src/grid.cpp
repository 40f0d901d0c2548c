#include "wkam/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wkam {

PeriodicGrid::PeriodicGrid(int d, int n) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("grid dimension must be 1, 2 or 3, got " + std::to_string(d));
  if (n < 4) throw std::invalid_argument("grid needs at least 4 nodes per axis, got " + std::to_string(n));
  d_ = d;
  n_ = n;
  spacing_ = 1.0 / n;
  size_ = 1;
  for (int i = 0; i < d; ++i) size_ *= static_cast<std::size_t>(n);
}

PeriodicGrid build_grid(int d, int n) { return PeriodicGrid(d, n); }

Coord PeriodicGrid::coord(std::size_t idx) const {
  Coord c{0, 0, 0};
  for (int i = 0; i < d_; ++i) {
    c[i] = static_cast<int>(idx % n_);
    idx /= n_;
  }
  return c;
}

std::size_t PeriodicGrid::index(const Coord& c) const {
  std::size_t idx = 0;
  for (int i = d_ - 1; i >= 0; --i) idx = idx * n_ + wrap(c[i]);
  return idx;
}

std::size_t PeriodicGrid::shifted(std::size_t idx, const Coord& delta) const {
  Coord c = coord(idx);
  for (int i = 0; i < d_; ++i) c[i] += delta[i];
  return index(c);
}

Point PeriodicGrid::position(std::size_t idx) const {
  Coord c = coord(idx);
  Point p{0, 0, 0};
  for (int i = 0; i < d_; ++i) p[i] = static_cast<double>(c[i]) / n_;
  return p;
}

double periodic_delta(double a, double b) {
  double t = a - b;
  t -= std::round(t);
  return t;
}

double torus_distance(const Point& a, const Point& b, int d) {
  double s = 0;
  for (int i = 0; i < d; ++i) {
    double t = periodic_delta(a[i], b[i]);
    s += t * t;
  }
  return std::sqrt(s);
}

double torus_distance(const PeriodicGrid& g, std::size_t a, std::size_t b) {
  return torus_distance(g.position(a), g.position(b), g.dim());
}

ScalarField::ScalarField(PeriodicGrid g, double fill) : grid_(g), values_(g.size(), fill) {}

ScalarField::ScalarField(PeriodicGrid g, std::vector<double> values) : grid_(g), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("field has " + std::to_string(values_.size()) + " values for a grid of " +
                                std::to_string(grid_.size()) + " nodes");
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }
std::size_t ScalarField::argmin() const {
  return static_cast<std::size_t>(std::min_element(values_.begin(), values_.end()) - values_.begin());
}

double ScalarField::interpolate(const Point& p) const {
  const int d = grid_.dim();
  const int n = grid_.n();
  Coord base{0, 0, 0};
  std::array<double, kMaxDim> frac{0, 0, 0};
  for (int i = 0; i < d; ++i) {
    double t = p[i] * n;
    double r = std::round(t);
    if (std::abs(t - r) < 1e-9) t = r;
    double fl = std::floor(t);
    base[i] = static_cast<int>(fl);
    frac[i] = t - fl;
  }
  double acc = 0;
  for (int corner = 0; corner < (1 << d); ++corner) {
    double w = 1;
    Coord c = base;
    for (int i = 0; i < d; ++i) {
      bool up = (corner >> i) & 1;
      w *= up ? frac[i] : 1 - frac[i];
      c[i] += up;
    }
    if (w != 0) acc += w * values_[grid_.index(c)];
  }
  return acc;
}

}  // namespace wkam
