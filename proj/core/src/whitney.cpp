#include "wkam/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace wkam {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double box_distance(const Point& lo, double edge, const Point& y, int d) {
  double s = 0;
  for (int a = 0; a < d; ++a) {
    double t = std::max({lo[a] - y[a], 0.0, y[a] - (lo[a] + edge)});
    s += t * t;
  }
  return std::sqrt(s);
}

double box_to_point_set(const Point& lo, double edge, const std::vector<Point>& pts, int d, std::size_t* arg) {
  double best = kInf;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double v = box_distance(lo, edge, pts[i], d);
    if (v < best) {
      best = v;
      *arg = i;
    }
  }
  return best;
}

}  // namespace

Point WhitneyCube::center() const {
  Point c = lo;
  for (double& v : c) v += 0.5 * edge;
  return c;
}

bool WhitneyProperties::constants_finite() const {
  for (double v : {edge_over_dist_min, edge_over_dist_max, dilated_min, dilated_max, neighbor_min, neighbor_max})
    if (!std::isfinite(v) || v <= 0) return false;
  return overlap > 0;
}

Point WhitneyDecomposition::domain_lo() const {
  Point p{0, 0, 0};
  for (int a = 0; a < grid.dim(); ++a) p[a] = domain.lo[a] * grid.spacing();
  return p;
}

double WhitneyDecomposition::domain_edge() const { return domain.side * grid.spacing(); }

bool WhitneyDecomposition::in_domain(const Point& y) const {
  Point lo = domain_lo();
  for (int a = 0; a < grid.dim(); ++a)
    if (y[a] < lo[a] || y[a] > lo[a] + domain_edge()) return false;
  return true;
}

double WhitneyDecomposition::distance(const Point& y) const {
  double best = kInf;
  for (const Point& p : anchors) {
    double s = 0;
    for (int a = 0; a < grid.dim(); ++a) s += (p[a] - y[a]) * (p[a] - y[a]);
    best = std::min(best, s);
  }
  return std::sqrt(best);
}

std::size_t WhitneyDecomposition::nearest_anchor(const Point& y) const {
  std::size_t arg = 0;
  box_to_point_set(y, 0.0, anchors, grid.dim(), &arg);
  return arg;
}

bool WhitneyDecomposition::dilated_contains(std::size_t j, const Point& y) const {
  return dilated_distance(j, y) == 0.0;
}

double WhitneyDecomposition::dilated_distance(std::size_t j, const Point& y) const {
  const WhitneyCube& c = cubes[j];
  double grow = 0.5 * lambda * c.edge;
  Point lo = c.lo;
  for (int a = 0; a < grid.dim(); ++a) lo[a] -= grow;
  return box_distance(lo, c.edge * (1 + lambda), y, grid.dim());
}

std::vector<std::size_t> WhitneyDecomposition::candidates(const Point& y) const { return candidates(y, 0.0); }

std::vector<std::size_t> WhitneyDecomposition::candidates(const Point& y, double radius) const {
  const int d = grid.dim();
  const int B = domain.side;
  const double h = grid.spacing();
  Point lo = domain_lo();
  int blo[kMaxDim] = {0, 0, 0}, bhi[kMaxDim] = {0, 0, 0};
  for (int a = 0; a < d; ++a) {
    blo[a] = std::clamp(static_cast<int>(std::floor((y[a] - radius - lo[a]) / h)), 0, B - 1);
    bhi[a] = std::clamp(static_cast<int>(std::floor((y[a] + radius - lo[a]) / h)), 0, B - 1);
  }
  std::vector<std::size_t> out;
  for (int i = blo[0]; i <= bhi[0]; ++i)
    for (int j = (d > 1 ? blo[1] : 0); j <= (d > 1 ? bhi[1] : 0); ++j)
      for (int k = (d > 2 ? blo[2] : 0); k <= (d > 2 ? bhi[2] : 0); ++k) {
        std::size_t b = (static_cast<std::size_t>(k) * B + j) * B + i;
        out.insert(out.end(), buckets[b].begin(), buckets[b].end());
      }
  if (blo[0] != bhi[0] || (d > 1 && blo[1] != bhi[1]) || (d > 2 && blo[2] != bhi[2])) {
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return out;
}

std::vector<std::size_t> WhitneyDecomposition::domain_nodes() const {
  const int d = grid.dim();
  std::vector<std::size_t> out;
  int m = domain.side + 1;
  int total = 1;
  for (int a = 0; a < d; ++a) total *= m;
  for (int t = 0; t < total; ++t) {
    Coord c{0, 0, 0};
    int r = t;
    for (int a = 0; a < d; ++a) {
      c[a] = domain.lo[a] + r % m;
      r /= m;
    }
    out.push_back(grid.index(c));
  }
  return out;
}

WhitneyDecomposition whitney_decompose(const PeriodicGrid& grid, const WhitneyDomain& domain,
                                       std::span<const char> mask, std::uint64_t seed, int refine) {
  const int d = grid.dim();
  if (domain.side < 1 || (domain.side & (domain.side - 1)) != 0)
    throw std::invalid_argument("Whitney domain side must be a power of two");
  for (int a = 0; a < d; ++a)
    if (domain.lo[a] < 0 || domain.lo[a] + domain.side >= grid.n())
      throw std::invalid_argument("Whitney domain must lie inside one period of the grid");
  if (mask.size() != grid.size()) throw std::invalid_argument("mask size does not match the grid");
  if (refine < 0 || refine > 10) throw std::invalid_argument("refine must be in [0, 10]");

  WhitneyDecomposition dec;
  dec.grid = grid;
  dec.domain = domain;
  dec.refine = refine;
  dec.lambda = 1.0 / (4 * std::sqrt(static_cast<double>(d)));
  for (std::size_t x : dec.domain_nodes())
    if (mask[x]) {
      dec.anchor_nodes.push_back(x);
      dec.anchors.push_back(grid.position(x));
    }
  if (dec.anchors.empty()) throw std::invalid_argument("Whitney decomposition needs a nonempty A* inside W1");

  const double h = grid.spacing();
  const double fine = h / (1 << refine);
  const std::int64_t root = static_cast<std::int64_t>(domain.side) << refine;
  const Point base = dec.domain_lo();
  const double sqrt_d = std::sqrt(static_cast<double>(d));

  std::vector<std::pair<std::array<std::int64_t, kMaxDim>, std::int64_t>> stack{{{0, 0, 0}, root}};
  while (!stack.empty()) {
    auto [corner, size] = stack.back();
    stack.pop_back();
    WhitneyCube c;
    c.fine_corner = corner;
    c.fine_size = size;
    c.edge = size * fine;
    for (int a = 0; a < d; ++a) c.lo[a] = base[a] + corner[a] * fine;
    c.dist = box_to_point_set(c.lo, c.edge, dec.anchors, d, &c.anchor);
    if (c.edge * sqrt_d <= 0.25 * c.dist) {
      dec.cubes.push_back(c);
      continue;
    }
    if (size == 1) {
      dec.residual.push_back(c);
      continue;
    }
    std::int64_t half = size / 2;
    for (int child = (1 << d) - 1; child >= 0; --child) {
      auto cc = corner;
      for (int a = 0; a < d; ++a) cc[a] += ((child >> a) & 1) * half;
      stack.push_back({cc, half});
    }
  }

  const int B = domain.side;
  std::size_t nb = 1;
  for (int a = 0; a < d; ++a) nb *= B;
  dec.buckets.assign(nb, {});
  for (std::size_t j = 0; j < dec.cubes.size(); ++j) {
    const WhitneyCube& c = dec.cubes[j];
    double grow = 0.5 * dec.lambda * c.edge;
    int blo[kMaxDim] = {0, 0, 0}, bhi[kMaxDim] = {0, 0, 0};
    for (int a = 0; a < d; ++a) {
      blo[a] = std::clamp(static_cast<int>(std::floor((c.lo[a] - grow - base[a]) / h)), 0, B - 1);
      bhi[a] = std::clamp(static_cast<int>(std::floor((c.lo[a] + c.edge + grow - base[a]) / h)), 0, B - 1);
    }
    for (int i = blo[0]; i <= bhi[0]; ++i)
      for (int jj = blo[1]; jj <= bhi[1]; ++jj)
        for (int k = blo[2]; k <= bhi[2]; ++k)
          dec.buckets[(static_cast<std::size_t>(k) * B + jj) * B + i].push_back(j);
  }

  WhitneyProperties& P = dec.properties;
  // i) and ii) on the sub-lattice raster.
  std::size_t cells = 1;
  for (int a = 0; a < d; ++a) cells *= static_cast<std::size_t>(root);
  if (cells <= (std::size_t{1} << 26)) {
    std::vector<std::uint8_t> paint(cells, 0);
    auto cell_index = [&](const std::array<std::int64_t, kMaxDim>& c) {
      std::size_t idx = 0;
      for (int a = d - 1; a >= 0; --a) idx = idx * root + static_cast<std::size_t>(c[a]);
      return idx;
    };
    for (const WhitneyCube& c : dec.cubes) {
      std::int64_t s = c.fine_size;
      std::int64_t count = 1;
      for (int a = 0; a < d; ++a) count *= s;
      for (std::int64_t t = 0; t < count; ++t) {
        auto p = c.fine_corner;
        std::int64_t r = t;
        for (int a = 0; a < d; ++a) {
          p[a] += r % s;
          r /= s;
        }
        std::uint8_t& v = paint[cell_index(p)];
        if (v == 1) ++P.overlapping_pairs;
        if (v < 255) ++v;
      }
    }
    for (std::size_t x : dec.domain_nodes()) {
      if (mask[x]) continue;
      Coord nc = grid.coord(x);
      bool covered = false;
      for (int corner = 0; corner < (1 << d) && !covered; ++corner) {
        std::array<std::int64_t, kMaxDim> p{0, 0, 0};
        bool inside = true;
        for (int a = 0; a < d; ++a) {
          p[a] = (static_cast<std::int64_t>(nc[a] - domain.lo[a]) << refine) - ((corner >> a) & 1);
          inside &= p[a] >= 0 && p[a] < root;
        }
        covered = inside && paint[cell_index(p)] > 0;
      }
      P.uncovered_nodes += !covered;
    }
  } else {
    for (std::size_t i = 0; i < dec.cubes.size(); ++i)
      for (std::size_t j = i + 1; j < dec.cubes.size(); ++j) {
        bool overlap = true;
        for (int a = 0; a < d; ++a) {
          std::int64_t lo = std::max(dec.cubes[i].fine_corner[a], dec.cubes[j].fine_corner[a]);
          std::int64_t hi = std::min(dec.cubes[i].fine_corner[a] + dec.cubes[i].fine_size,
                                     dec.cubes[j].fine_corner[a] + dec.cubes[j].fine_size);
          overlap &= hi > lo;
        }
        P.overlapping_pairs += overlap;
      }
    for (std::size_t x : dec.domain_nodes()) {
      if (mask[x]) continue;
      Point y = grid.position(x);
      bool covered = false;
      for (std::size_t j : dec.candidates(y))
        if (box_distance(dec.cubes[j].lo, dec.cubes[j].edge, y, d) == 0) covered = true;
      P.uncovered_nodes += !covered;
    }
  }
  P.disjoint_interiors = P.overlapping_pairs == 0;
  P.covers_nodes = P.uncovered_nodes == 0;

  // iii) and iv).
  P.edge_over_dist_min = P.dilated_min = kInf;
  P.edge_over_dist_max = P.dilated_max = 0;
  for (const WhitneyCube& c : dec.cubes) {
    double r = c.edge / c.dist;
    P.edge_over_dist_min = std::min(P.edge_over_dist_min, r);
    P.edge_over_dist_max = std::max(P.edge_over_dist_max, r);
    double grow = 0.5 * dec.lambda * c.edge;
    std::vector<Point> samples{c.center()};
    for (int corner = 0; corner < (1 << d); ++corner) {
      Point p = c.lo;
      for (int a = 0; a < d; ++a) p[a] += ((corner >> a) & 1) ? c.edge + grow : -grow;
      samples.push_back(p);
    }
    for (int a = 0; a < d; ++a)
      for (int sgn : {-1, 1}) {
        Point p = c.center();
        p[a] += sgn * (0.5 * c.edge + grow);
        samples.push_back(p);
      }
    for (const Point& p : samples) {
      double ratio = dec.distance(p) / c.edge;
      P.dilated_min = std::min(P.dilated_min, ratio);
      P.dilated_max = std::max(P.dilated_max, ratio);
    }
  }

  // v) and vi) on all W₁ nodes off A* plus random points.
  std::vector<Point> probes;
  for (std::size_t x : dec.domain_nodes())
    if (!mask[x]) probes.push_back(grid.position(x));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    Point p{0, 0, 0};
    for (int a = 0; a < d; ++a) p[a] = base[a] + unit(rng) * dec.domain_edge();
    probes.push_back(p);
  }
  P.neighbor_min = kInf;
  P.neighbor_max = 0;
  for (const Point& z : probes) {
    double dz = dec.distance(z);
    if (dz <= 0) continue;
    int active = 0;
    for (std::size_t j : dec.candidates(z, dz / 8)) {
      double dist = dec.dilated_distance(j, z);
      if (dist <= dz / 8) {
        double r = dec.cubes[j].edge / dz;
        P.neighbor_min = std::min(P.neighbor_min, r);
        P.neighbor_max = std::max(P.neighbor_max, r);
      }
      active += dist == 0;
    }
    P.overlap = std::max(P.overlap, active);
  }
  return dec;
}

PartitionOfUnity::PartitionOfUnity(const WhitneyDecomposition& dec, int order) : dec_(&dec), order_(order) {
  if (order < 1) throw std::invalid_argument("bump order must be at least 1");
  for (int k = 0; k <= order; ++k) coeff_.push_back(binom(order + k, k) * binom(2 * order + 1, order - k));
}

double PartitionOfUnity::profile(double t) const {
  t = std::abs(t);
  double edge = 0.5 * (1 + dec_->lambda);
  if (t <= 0.5) return 1;
  if (t >= edge) return 0;
  double u = (t - 0.5) / (edge - 0.5);
  double poly = 0, pw = 1;
  for (double c : coeff_) {
    poly += c * pw;
    pw *= -u;
  }
  return 1 - std::pow(u, order_ + 1) * poly;
}

double PartitionOfUnity::bump(std::size_t j, const Point& y) const {
  const WhitneyCube& c = dec_->cubes[j];
  Point ctr = c.center();
  double v = 1;
  for (int a = 0; a < dec_->grid.dim() && v != 0; ++a) v *= profile((y[a] - ctr[a]) / c.edge);
  return v;
}

double PartitionOfUnity::sigma(const Point& y) const {
  double s = 0;
  for (std::size_t j : dec_->candidates(y)) s += bump(j, y);
  return s;
}

std::vector<std::pair<std::size_t, double>> PartitionOfUnity::weights(const Point& y) const {
  std::vector<std::pair<std::size_t, double>> out;
  double s = 0;
  for (std::size_t j : dec_->candidates(y)) {
    double b = bump(j, y);
    if (b > 0) {
      out.push_back({j, b});
      s += b;
    }
  }
  for (auto& [j, v] : out) v /= s;
  return out;
}

PartitionReport check_partition(const PartitionOfUnity& pou, std::size_t samples, std::uint64_t seed) {
  const WhitneyDecomposition& dec = pou.decomposition();
  const int d = dec.grid.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PartitionReport rep;
  Point base = dec.domain_lo();
  while (rep.samples < samples) {
    Point y{0, 0, 0};
    for (int a = 0; a < d; ++a) y[a] = base[a] + unit(rng) * dec.domain_edge();
    double dy = dec.distance(y);
    if (dy <= 0) continue;
    ++rep.samples;
    auto w = pou.weights(y);
    if (w.empty()) {
      bool capped = std::any_of(dec.residual.begin(), dec.residual.end(), [&](const WhitneyCube& c) {
        for (int a = 0; a < d; ++a)
          if (y[a] < c.lo[a] || y[a] > c.lo[a] + c.edge) return false;
        return true;
      });
      ++(capped ? rep.below_resolution : rep.uncovered);
      continue;
    }
    rep.max_active = std::max(rep.max_active, static_cast<int>(w.size()));
    double sum = 0;
    for (auto [j, v] : w) {
      sum += v;
      if (!dec.dilated_contains(j, y)) rep.supports_ok = false;
      const Point& xj = dec.anchors[dec.cubes[j].anchor];
      double dist = 0;
      for (int a = 0; a < d; ++a) dist += (xj[a] - y[a]) * (xj[a] - y[a]);
      rep.alpha = std::max(rep.alpha, std::sqrt(dist) / dy);
      double step = 1e-6 * dy;
      double g2 = 0;
      for (int a = 0; a < d; ++a) {
        Point p = y, m = y;
        p[a] += step;
        m[a] -= step;
        double sp = pou.sigma(p), sm = pou.sigma(m);
        double fp = sp > 0 ? pou.bump(j, p) / sp : 0, fm = sm > 0 ? pou.bump(j, m) / sm : 0;
        g2 += std::pow((fp - fm) / (2 * step), 2);
      }
      rep.M1 = std::max(rep.M1, std::sqrt(g2) * dy);
    }
    rep.max_sum_error = std::max(rep.max_sum_error, std::abs(sum - 1));
  }
  return rep;
}

}  // namespace wkam
