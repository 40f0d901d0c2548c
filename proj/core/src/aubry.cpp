#include "wkam/aubry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "union_find.hpp"
#include "wkam/error.hpp"

namespace wkam {
namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
}  // namespace

std::size_t Pseudometric::position(std::size_t node) const {
  auto it = std::find(nodes.begin(), nodes.end(), node);
  if (it == nodes.end()) throw std::invalid_argument("node " + std::to_string(node) + " not in pseudometric");
  return static_cast<std::size_t>(it - nodes.begin());
}

Pseudometric delta_pseudometric(const BarrierMatrix& h) {
  if (h.kind() != BarrierKind::peierls) throw std::invalid_argument("pseudometric needs a peierls barrier");
  Pseudometric d;
  d.nodes = h.sources();
  const std::size_t m = d.nodes.size();
  d.values.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      double v = h.at(i, d.nodes[j]) + h.at(j, d.nodes[i]);
      if (v < -d.tolerance) {
        std::ostringstream msg;
        msg << "negative pseudodistance " << v << " between nodes " << d.nodes[i] << " and " << d.nodes[j];
        throw NumericalInconsistency(msg.str());
      }
      v = std::max(0.0, v);
      d.values[i * m + j] = d.values[j * m + i] = v;
    }
  return d;
}

bool AubrySet::contains(std::size_t node) const { return std::binary_search(nodes.begin(), nodes.end(), node); }

double default_tol_aubry(const ScalarField& U, double alpha) {
  double h = U.grid().spacing();
  double speed = 0;
  for (double u : U.values()) speed = std::max(speed, std::sqrt(2 * std::max(0.0, u + alpha)));
  return std::max(8 * h * h * speed, 1e-9);
}

AubrySet aubry_set_from_diagonal(const PeriodicGrid& grid, std::span<const double> diagonal, double tol,
                                 const ScalarField* potential) {
  if (!(tol > 0)) throw std::invalid_argument("tol_aubry must be positive");
  if (diagonal.size() != grid.size()) throw std::invalid_argument("diagonal length does not match the grid");
  AubrySet a;
  a.tolerance = tol;
  a.residual.assign(diagonal.begin(), diagonal.end());
  a.min_residual_outside = kInf;
  double min_all = kInf;
  for (std::size_t x = 0; x < grid.size(); ++x) {
    double r = a.residual[x];
    if (std::isnan(r)) continue;
    min_all = std::min(min_all, r);
    if (r <= tol) a.nodes.push_back(x);
    else a.min_residual_outside = std::min(a.min_residual_outside, r);
  }
  if (a.nodes.empty()) {
    std::ostringstream msg;
    msg << "empty Aubry set at tol_aubry=" << tol << "; smallest residual h(x,x) is " << min_all;
    throw std::runtime_error(msg.str());
  }
  if (potential) {
    double umin = potential->min();
    for (std::size_t x : a.nodes)
      if ((*potential)[x] - umin > 1e-9) a.outside_min_set.push_back(x);
  }
  return a;
}

AubrySet aubry_set(const BarrierMatrix& h, double tol, const ScalarField* potential) {
  if (h.kind() != BarrierKind::peierls) throw std::invalid_argument("Aubry set needs a peierls barrier");
  std::vector<double> diag(h.cols(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t r = 0; r < h.rows(); ++r) diag[h.sources()[r]] = h.at(r, h.sources()[r]);
  return aubry_set_from_diagonal(h.grid(), diag, tol, potential);
}

std::size_t QuotientSpace::class_of(std::size_t node) const {
  for (std::size_t p = 0; p < classes.size(); ++p)
    if (std::binary_search(classes[p].begin(), classes[p].end(), node)) return p;
  throw std::invalid_argument("node " + std::to_string(node) + " is not in the Aubry set");
}

QuotientSpace quotient(const Pseudometric& delta, const AubrySet& aubry, double tol_class) {
  if (tol_class < aubry.tolerance) throw std::invalid_argument("tol_class must be at least tol_aubry");
  const std::size_t m = aubry.nodes.size();
  std::map<std::size_t, std::size_t> pos_of;
  for (std::size_t i = 0; i < delta.nodes.size(); ++i) pos_of[delta.nodes[i]] = i;
  std::vector<std::size_t> pos(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto it = pos_of.find(aubry.nodes[i]);
    if (it == pos_of.end())
      throw std::invalid_argument("Aubry node " + std::to_string(aubry.nodes[i]) + " missing from pseudometric");
    pos[i] = it->second;
  }
  auto dist = [&](std::size_t i, std::size_t j) { return i == j ? 0.0 : delta.at(pos[i], pos[j]); };

  detail::UnionFind uf(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (dist(i, j) <= tol_class) uf.unite(i, j);

  QuotientSpace q;
  q.tol_class = tol_class;
  std::vector<std::size_t> cls(m, kNone);
  std::map<std::size_t, std::size_t> root_class;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t r = uf.find(i);
    auto [it, fresh] = root_class.try_emplace(r, q.classes.size());
    if (fresh) q.classes.emplace_back();
    cls[i] = it->second;
    q.classes[cls[i]].push_back(aubry.nodes[i]);
  }
  const std::size_t k = q.classes.size();
  std::vector<std::size_t> rep_pos(k, kNone);
  for (std::size_t i = 0; i < m; ++i)
    if (rep_pos[cls[i]] == kNone) rep_pos[cls[i]] = i;
  for (std::size_t p = 0; p < k; ++p) q.representatives.push_back(aubry.nodes[rep_pos[p]]);

  q.delta_bar.assign(k * k, 0.0);
  std::vector<double> lo(k * k, kInf), hi(k * k, -kInf);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t idx = cls[i] * k + cls[j];
      double v = dist(i, j);
      lo[idx] = std::min(lo[idx], v);
      hi[idx] = std::max(hi[idx], v);
    }
  q.spread.assign(k * k, 0.0);
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t r = 0; r < k; ++r) {
      q.delta_bar[p * k + r] = p == r ? 0.0 : dist(rep_pos[p], rep_pos[r]);
      q.spread[p * k + r] = p == r ? hi[p * k + r] : hi[p * k + r] - lo[p * k + r];
    }
  return q;
}

ComponentRung epsilon_components(const QuotientSpace& q, double epsilon) {
  if (epsilon < 0) throw std::invalid_argument("epsilon must be non-negative");
  const std::size_t k = q.size();
  detail::UnionFind uf(k);
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t r = p + 1; r < k; ++r)
      if (q.at(p, r) <= epsilon) uf.unite(p, r);
  ComponentRung rung;
  rung.epsilon = epsilon;
  rung.membership.resize(k);
  std::map<std::size_t, std::size_t> ids;
  for (std::size_t p = 0; p < k; ++p) {
    auto [it, fresh] = ids.try_emplace(uf.find(p), ids.size());
    rung.membership[p] = it->second;
  }
  rung.components = ids.size();
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t r = p + 1; r < k; ++r)
      if (rung.membership[p] == rung.membership[r]) rung.max_diameter = std::max(rung.max_diameter, q.at(p, r));
  return rung;
}

std::vector<double> default_epsilon_ladder(const QuotientSpace& q, int rungs) {
  double top = 0;
  for (double v : q.delta_bar) top = std::max(top, v);
  double bottom = q.tol_class > 0 ? q.tol_class : 1e-12;
  if (top <= bottom || rungs < 2) return {std::max(top, bottom)};
  std::vector<double> ladder;
  double ratio = std::pow(bottom / top, 1.0 / (rungs - 1));
  for (int i = 0; i < rungs; ++i) ladder.push_back(i + 1 == rungs ? bottom : top * std::pow(ratio, i));
  return ladder;
}

ComponentReport disconnectedness_scan(const QuotientSpace& q, std::span<const double> ladder) {
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (!(ladder[i] < ladder[i - 1])) throw std::invalid_argument("epsilon ladder must be strictly decreasing");
  ComponentReport report;
  for (double eps : ladder) report.rungs.push_back(epsilon_components(q, eps));
  for (auto it = report.rungs.rbegin(); it != report.rungs.rend(); ++it) {
    if (it->max_diameter > 2 * it->epsilon) break;
    report.disconnected_at = it->epsilon;
  }
  return report;
}

}  // namespace wkam
