#pragma once

#include <memory>
#include <vector>

#include "wkam/grid.hpp"

namespace wkam {

// Multi-indices of total order ≤ r in d variables, graded order.
class MultiIndexSet {
 public:
  MultiIndexSet(int d, int r);
  int dim() const { return d_; }
  int degree() const { return r_; }
  std::size_t size() const { return idx_.size(); }
  const Coord& operator[](std::size_t i) const { return idx_[i]; }
  std::size_t index_of(const Coord& a) const;
  double factorial(std::size_t i) const { return fact_[i]; }  // α!
  int order(std::size_t i) const { return ord_[i]; }

  struct Term {
    std::size_t a, b, c;
  };
  const std::vector<Term>& products() const { return prod_; }

 private:
  int d_, r_;
  std::vector<Coord> idx_;
  std::vector<double> fact_;
  std::vector<int> ord_;
  std::vector<std::size_t> lookup_;
  std::vector<Term> prod_;
  std::size_t key(const Coord& a) const;
};

// Truncated multivariate Taylor polynomial Σ c_α t^α, |α| ≤ r.
class Jet {
 public:
  explicit Jet(std::shared_ptr<const MultiIndexSet> set);
  static Jet constant(std::shared_ptr<const MultiIndexSet> set, double v);
  static Jet variable(std::shared_ptr<const MultiIndexSet> set, int axis);

  const MultiIndexSet& set() const { return *set_; }
  std::shared_ptr<const MultiIndexSet> set_ptr() const { return set_; }
  std::vector<double>& coeffs() { return c_; }
  const std::vector<double>& coeffs() const { return c_; }
  double coeff(const Coord& a) const { return c_[set_->index_of(a)]; }
  // D^α of the polynomial at t = 0.
  double derivative(const Coord& a) const;

  Jet operator+(const Jet& o) const;
  Jet operator-(const Jet& o) const;
  Jet operator*(const Jet& o) const;
  Jet operator*(double s) const;

  double evaluate(const Point& t) const;
  // Coefficients of |α| ≤ s set to zero.
  Jet drop_below(int s) const;
  // t ↦ J(t + δ), re-expanded.
  Jet shift(const Point& delta) const;

 private:
  std::shared_ptr<const MultiIndexSet> set_;
  std::vector<double> c_;
};

// outer(inner_1(t), …, inner_d(t)) truncated at degree r. Exact as a Taylor
// composition when the inner jets have zero constant terms.
Jet compose(const Jet& outer, const std::vector<Jet>& inner);

}  // namespace wkam
