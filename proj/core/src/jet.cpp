#include "wkam/jet.hpp"

#include <cmath>
#include <stdexcept>

namespace wkam {

MultiIndexSet::MultiIndexSet(int d, int r) : d_(d), r_(r) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("jet dimension must be in 1..3");
  if (r < 0) throw std::invalid_argument("jet degree must be non-negative");
  for (int k = 0; k <= r; ++k) {
    // Lexicographic within each order, first axis fastest.
    Coord a{0, 0, 0};
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(k + 1);
    for (std::size_t t = 0; t < total; ++t) {
      std::size_t rem = t;
      int sum = 0;
      for (int i = 0; i < d; ++i) {
        a[i] = static_cast<int>(rem % (k + 1));
        rem /= k + 1;
        sum += a[i];
      }
      if (sum != k) continue;
      idx_.push_back(a);
      ord_.push_back(k);
      double f = 1;
      for (int i = 0; i < d; ++i)
        for (int j = 2; j <= a[i]; ++j) f *= j;
      fact_.push_back(f);
    }
  }
  std::size_t cells = 1;
  for (int i = 0; i < d; ++i) cells *= static_cast<std::size_t>(r + 1);
  lookup_.assign(cells, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < idx_.size(); ++i) lookup_[key(idx_[i])] = i;
  for (std::size_t a = 0; a < idx_.size(); ++a)
    for (std::size_t b = 0; b < idx_.size(); ++b) {
      if (ord_[a] + ord_[b] > r) continue;
      Coord c{0, 0, 0};
      for (int i = 0; i < d; ++i) c[i] = idx_[a][i] + idx_[b][i];
      prod_.push_back({a, b, lookup_[key(c)]});
    }
}

std::size_t MultiIndexSet::key(const Coord& a) const {
  std::size_t k = 0;
  for (int i = d_ - 1; i >= 0; --i) k = k * (r_ + 1) + static_cast<std::size_t>(a[i]);
  return k;
}

std::size_t MultiIndexSet::index_of(const Coord& a) const {
  int sum = 0;
  for (int i = 0; i < d_; ++i) {
    if (a[i] < 0) throw std::out_of_range("negative multi-index");
    sum += a[i];
  }
  if (sum > r_) throw std::out_of_range("multi-index above jet degree");
  return lookup_[key(a)];
}

Jet::Jet(std::shared_ptr<const MultiIndexSet> set) : set_(std::move(set)), c_(set_->size(), 0.0) {}

Jet Jet::constant(std::shared_ptr<const MultiIndexSet> set, double v) {
  Jet j(std::move(set));
  j.c_[0] = v;
  return j;
}

Jet Jet::variable(std::shared_ptr<const MultiIndexSet> set, int axis) {
  Jet j(std::move(set));
  if (j.set_->degree() >= 1) {
    Coord a{0, 0, 0};
    a[axis] = 1;
    j.c_[j.set_->index_of(a)] = 1;
  }
  return j;
}

double Jet::derivative(const Coord& a) const {
  std::size_t i = set_->index_of(a);
  return c_[i] * set_->factorial(i);
}

Jet Jet::operator+(const Jet& o) const {
  Jet r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
  return r;
}

Jet Jet::operator-(const Jet& o) const {
  Jet r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
  return r;
}

Jet Jet::operator*(const Jet& o) const {
  Jet r(set_);
  for (const auto& t : set_->products()) r.c_[t.c] += c_[t.a] * o.c_[t.b];
  return r;
}

Jet Jet::operator*(double s) const {
  Jet r = *this;
  for (double& v : r.c_) v *= s;
  return r;
}

double Jet::evaluate(const Point& t) const {
  double sum = 0;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    double m = c_[i];
    for (int a = 0; a < set_->dim(); ++a) m *= std::pow(t[a], (*set_)[i][a]);
    sum += m;
  }
  return sum;
}

Jet Jet::drop_below(int s) const {
  Jet r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (set_->order(i) <= s) r.c_[i] = 0;
  return r;
}

Jet Jet::shift(const Point& delta) const {
  const MultiIndexSet& S = *set_;
  Jet r(set_);
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < S.size(); ++j) {
      double w = c_[i];
      for (int a = 0; a < S.dim() && w != 0; ++a) {
        int n = S[i][a], k = S[j][a];
        if (k > n) {
          w = 0;
          break;
        }
        double binom = 1;
        for (int q = 1; q <= k; ++q) binom = binom * (n - k + q) / q;
        w *= binom * std::pow(delta[a], n - k);
      }
      r.c_[j] += w;
    }
  }
  return r;
}

Jet compose(const Jet& outer, const std::vector<Jet>& inner) {
  const MultiIndexSet& O = outer.set();
  if (static_cast<int>(inner.size()) != O.dim()) throw std::invalid_argument("compose: inner jet count must match outer dimension");
  if (inner.empty()) throw std::invalid_argument("compose: no inner jets");
  auto set = inner.front().set_ptr();
  for (const Jet& j : inner)
    if (j.set_ptr() != set && (j.set().dim() != set->dim() || j.set().degree() != set->degree()))
      throw std::invalid_argument("compose: inner jets must share a multi-index set");
  const int r = O.degree();
  std::vector<std::vector<Jet>> pow(O.dim());
  for (int i = 0; i < O.dim(); ++i) {
    pow[i].push_back(Jet::constant(set, 1.0));
    for (int k = 1; k <= r; ++k) pow[i].push_back(pow[i].back() * inner[i]);
  }
  Jet out(set);
  for (std::size_t a = 0; a < O.size(); ++a) {
    double c = outer.coeffs()[a];
    if (c == 0) continue;
    Jet term = pow[0][O[a][0]];
    for (int i = 1; i < O.dim(); ++i) term = term * pow[i][O[a][i]];
    out = out + term * c;
  }
  return out;
}

}  // namespace wkam
