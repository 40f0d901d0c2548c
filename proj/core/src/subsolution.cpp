#include "wkam/subsolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "intervals.hpp"
#include "wkam/error.hpp"

namespace wkam {
namespace {

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0;
  std::size_t k = static_cast<std::size_t>(q * (v.size() - 1));
  std::nth_element(v.begin(), v.begin() + k, v.end());
  return v[k];
}

}  // namespace

double domination_violation(const ScalarField& u, const ActionGraph& g) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < g.node_count(); ++x)
    for (std::size_t s = 0; s < g.degree(); ++s)
      worst = std::max(worst, u[g.target(x, s)] - u[x] - g.weight(x, s));
  return worst;
}

Subsolution barrier_subsolution(const BarrierMatrix& h, const ActionGraph& g, std::size_t z) {
  if (h.kind() != BarrierKind::peierls) throw std::invalid_argument("barrier subsolution needs a peierls barrier");
  auto row = h.row(h.row_of(z));
  Subsolution s{ScalarField(h.grid(), std::vector<double>(row.begin(), row.end())), z, g.alpha, 0};
  s.max_violation = domination_violation(s.u, g);
  if (s.max_violation > 1e-6) {
    std::ostringstream msg;
    msg << "h(" << z << ", .) violates edge domination by " << s.max_violation;
    throw NumericalInconsistency(msg.str());
  }
  return s;
}

ResidualReport verify_subsolution(const ScalarField& u, const LagrangianModel& model, double alpha) {
  if (!(u.grid() == model.grid())) throw std::invalid_argument("subsolution and model live on different grids");
  const PeriodicGrid& g = u.grid();
  VectorField du = gradient_fd(u);
  VectorField eta = form_at_nodes(model.eta);
  ResidualReport r;
  r.residual = ScalarField(g);
  for (std::size_t x = 0; x < g.size(); ++x) {
    double p2 = 0;
    for (int a = 0; a < g.dim(); ++a) p2 += std::pow(du[x][a] + eta[x][a], 2);
    r.residual[x] = 0.5 * p2 / model.gamma - model.potential[x] - alpha;
  }
  r.max = r.residual.max();
  r.q50 = quantile(r.residual.values(), 0.5);
  r.q90 = quantile(r.residual.values(), 0.9);
  r.q99 = quantile(r.residual.values(), 0.99);
  r.constant = r.max / g.spacing();
  return r;
}

RepresentationReport representation_check(const BarrierMatrix& h, const AubrySet& aubry,
                                          std::span<const std::size_t> samples, bool include_constants) {
  if (h.kind() != BarrierKind::peierls) throw std::invalid_argument("representation check needs a peierls barrier");
  std::vector<std::size_t> rows;
  for (std::size_t z : samples) rows.push_back(h.row_of(z));
  RepresentationReport rep;
  rep.max_violation = -std::numeric_limits<double>::infinity();
  const std::size_t V = h.cols();
  for (std::size_t x : aubry.nodes) {
    if (!h.has_row(x)) continue;
    auto hx = h.row(h.row_of(x));
    for (std::size_t y = 0; y < V; ++y) {
      double best = include_constants ? 0.0 : -std::numeric_limits<double>::infinity();
      for (std::size_t r : rows) {
        double v = h.at(r, y) - h.at(r, x);
        best = std::max(best, v);
        rep.max_violation = std::max(rep.max_violation, v - hx[y]);
      }
      if (include_constants) rep.max_violation = std::max(rep.max_violation, -hx[y]);
      rep.max_gap = std::max(rep.max_gap, hx[y] - best);
      ++rep.pairs;
    }
  }
  rep.attained = rep.max_gap <= 1e-6;
  return rep;
}

DifferenceFunction difference(const ScalarField& u, const ScalarField& v, double kappa) {
  if (!(u.grid() == v.grid())) throw std::invalid_argument("difference of fields on different grids");
  if (!(kappa > 0)) throw std::invalid_argument("kappa must be positive");
  const PeriodicGrid& g = u.grid();
  DifferenceFunction d;
  d.kappa = kappa;
  d.w = ScalarField(g);
  for (std::size_t x = 0; x < g.size(); ++x) d.w[x] = u[x] - v[x];
  VectorField grad = gradient_fd(d.w);
  d.critical.resize(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) {
    double n2 = 0;
    for (int a = 0; a < g.dim(); ++a) {
      n2 += grad[x][a] * grad[x][a];
      Coord e{0, 0, 0};
      e[a] = 1;
      d.edge_lipschitz = std::max(d.edge_lipschitz, std::abs(d.w[g.shifted(x, e)] - d.w[x]) / g.spacing());
    }
    d.critical[x] = std::sqrt(n2) <= kappa * g.spacing();
  }
  return d;
}

EvaluationMap evaluation_map(const DifferenceFunction& w, const QuotientSpace& q) {
  EvaluationMap e;
  e.budget = q.tol_class * (1 + w.edge_lipschitz);
  for (std::size_t p = 0; p < q.size(); ++p) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t x : q.classes[p]) {
      lo = std::min(lo, w.w[x]);
      hi = std::max(hi, w.w[x]);
    }
    e.values.push_back(w.w[q.representatives[p]]);
    e.spread.push_back(hi - lo);
    if (hi - lo > e.budget) {
      std::ostringstream msg;
      msg << "class " << p << " spread " << (hi - lo) << " exceeds budget " << e.budget;
      throw std::runtime_error(msg.str());
    }
  }
  e.lipschitz_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < q.size(); ++p)
    for (std::size_t r = 0; r < q.size(); ++r)
      e.lipschitz_excess =
          std::max(e.lipschitz_excess, std::abs(e.values[p] - e.values[r]) - q.at(p, r) - 2 * q.tol_class);
  e.lipschitz_ok = e.lipschitz_excess <= 0;
  return e;
}

MorseSardEstimate morse_sard_estimate(const DifferenceFunction& w) {
  const PeriodicGrid& g = w.w.grid();
  const int d = g.dim();
  MorseSardEstimate est;
  std::vector<std::pair<double, double>> iv;
  for (std::size_t x = 0; x < g.size(); ++x) {
    est.critical_nodes += w.critical[x] != 0;
    bool meets = false;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int corner = 0; corner < (1 << d); ++corner) {
      Coord c{0, 0, 0};
      for (int a = 0; a < d; ++a) c[a] = (corner >> a) & 1;
      std::size_t y = g.shifted(x, c);
      meets |= w.critical[y] != 0;
      lo = std::min(lo, w.w[y]);
      hi = std::max(hi, w.w[y]);
    }
    if (meets) iv.push_back({lo, hi});
  }
  est.cells = iv.size();
  est.bound = detail::union_length(std::move(iv));
  return est;
}

}  // namespace wkam
