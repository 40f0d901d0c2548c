#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace wkam {

inline constexpr int kMaxDim = 3;

using Coord = std::array<int, kMaxDim>;
using Point = std::array<double, kMaxDim>;

// Uniform periodic lattice on the unit torus T^d, n nodes per axis, nodes
// stored row-major with axis 0 fastest.
class PeriodicGrid {
 public:
  PeriodicGrid() = default;
  PeriodicGrid(int d, int n);

  int dim() const { return d_; }
  int n() const { return n_; }
  double spacing() const { return spacing_; }
  std::size_t size() const { return size_; }

  int wrap(int i) const {
    int r = i % n_;
    return r < 0 ? r + n_ : r;
  }
  Coord coord(std::size_t idx) const;
  std::size_t index(const Coord& c) const;
  std::size_t shifted(std::size_t idx, const Coord& delta) const;
  Point position(std::size_t idx) const;

  bool operator==(const PeriodicGrid&) const = default;

 private:
  int d_ = 1;
  int n_ = 1;
  double spacing_ = 1.0;
  std::size_t size_ = 1;
};

PeriodicGrid build_grid(int d, int n);

// Shortest periodic displacement a - b per axis, in [-1/2, 1/2].
double periodic_delta(double a, double b);
double torus_distance(const Point& a, const Point& b, int d);
double torus_distance(const PeriodicGrid& g, std::size_t a, std::size_t b);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(PeriodicGrid g, double fill = 0.0);
  ScalarField(PeriodicGrid g, std::vector<double> values);

  const PeriodicGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  double min() const;
  double max() const;
  std::size_t argmin() const;

  // Periodic multilinear interpolation at an arbitrary point.
  double interpolate(const Point& p) const;

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

}  // namespace wkam
