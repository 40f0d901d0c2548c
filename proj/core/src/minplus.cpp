#include "wkam/minplus.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wkam/error.hpp"
#include "wkam/parallel.hpp"

namespace wkam {
namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

MinPlusMatrix::MinPlusMatrix(std::size_t n) : n_(n), a_(n * n, kInf) {}

MinPlusMatrix MinPlusMatrix::identity(std::size_t n) {
  MinPlusMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 0;
  return m;
}

MinPlusMatrix MinPlusMatrix::one_step(const ActionGraph& g) {
  MinPlusMatrix m(g.node_count());
  for (std::size_t x = 0; x < g.node_count(); ++x) {
    m(x, x) = g.stationary[x];
    for (std::size_t s = 0; s < g.degree(); ++s) {
      double& e = m(x, g.target(x, s));
      e = std::min(e, g.weight(x, s));
    }
  }
  return m;
}

MinPlusMatrix MinPlusMatrix::multiply(const MinPlusMatrix& rhs, int threads) const {
  if (rhs.n_ != n_) throw std::invalid_argument("min-plus product of mismatched sizes");
  MinPlusMatrix out(n_);
  parallel_for(n_, threads, [&](std::size_t i) {
    double* o = &out.a_[i * n_];
    for (std::size_t k = 0; k < n_; ++k) {
      double aik = a_[i * n_ + k];
      if (aik == kInf) continue;
      const double* b = &rhs.a_[k * n_];
      for (std::size_t j = 0; j < n_; ++j) o[j] = std::min(o[j], aik + b[j]);
    }
  });
  return out;
}

MinPlusMatrix MinPlusMatrix::step(const ActionGraph& g) const {
  MinPlusMatrix out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const double* row = &a_[i * n_];
    double* o = &out.a_[i * n_];
    for (std::size_t y = 0; y < n_; ++y) {
      double best = row[y] + g.stationary[y];
      for (std::size_t s = 0; s < g.degree(); ++s) {
        std::size_t x = g.source(y, s);
        best = std::min(best, row[x] + g.weight(x, s));
      }
      o[y] = best;
    }
  }
  return out;
}

void MinPlusMatrix::min_assign(const MinPlusMatrix& other) {
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] = std::min(a_[i], other.a_[i]);
}

LiminfResult minplus_power_liminf(const ActionGraph& g, std::size_t horizon, int threads) {
  const std::size_t V = g.node_count();
  if (horizon == 0) horizon = 4 * V;
  if (horizon < 2 * V) throw std::invalid_argument("liminf horizon must be at least twice the node count");
  const MinPlusMatrix A = MinPlusMatrix::one_step(g);

  auto window = [&](const MinPlusMatrix& start) {
    MinPlusMatrix acc = start, cur = start;
    for (std::size_t j = 1; j < V; ++j) {
      cur = cur.step(g);
      acc.min_assign(cur);
    }
    return acc;
  };

  std::size_t K = 1;
  MinPlusMatrix P = A;
  while (K < V) {
    P = P.multiply(P, threads);
    K *= 2;
  }
  MinPlusMatrix W = window(P);
  double drift = kInf;
  while (2 * K <= horizon) {
    P = P.multiply(P, threads);
    K *= 2;
    MinPlusMatrix next = window(P);
    drift = 0;
    for (std::size_t i = 0; i < V; ++i)
      for (std::size_t j = 0; j < V; ++j) {
        double a = W(i, j), b = next(i, j);
        if (a == kInf && b == kInf) continue;
        drift = std::max(drift, std::abs(a - b) / (1 + std::abs(a)));
      }
    W = std::move(next);
    if (drift <= 1e-13) {
      LiminfResult out;
      std::vector<std::size_t> all(V);
      for (std::size_t i = 0; i < V; ++i) all[i] = i;
      out.barrier = BarrierMatrix(g.grid, BarrierKind::peierls, all);
      for (std::size_t i = 0; i < V; ++i)
        for (std::size_t j = 0; j < V; ++j) out.barrier.at(i, j) = W(i, j);
      out.power = K;
      out.drift = drift;
      return out;
    }
  }
  std::ostringstream msg;
  msg << "min-plus powers did not settle by step " << K << " (horizon " << horizon << "), residual drift " << drift;
  throw NonConvergence(msg.str(), drift);
}

}  // namespace wkam
