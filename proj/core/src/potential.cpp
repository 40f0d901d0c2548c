#include "wkam/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wkam {
namespace {

using std::numbers::pi;

double sin_sq(double t) {
  double s = std::sin(pi * t);
  return s * s;
}

ScalarField sample_trig(const TrigPotential& p, const PeriodicGrid& g) {
  ScalarField u(g, p.offset);
  for (std::size_t i = 0; i < g.size(); ++i) {
    Point x = g.position(i);
    double acc = p.offset;
    for (const auto& t : p.terms) {
      double arg = t.phase;
      for (int a = 0; a < g.dim(); ++a) arg += 2 * pi * t.wavevector[a] * x[a];
      acc += t.amplitude * std::cos(arg);
    }
    u[i] = acc;
  }
  return u;
}

ScalarField sample_two_well(const TwoWellPotential& p, const PeriodicGrid& g) {
  if (!(p.width > 0)) throw std::invalid_argument("two_well width must be positive");
  ScalarField u(g);
  double w2 = p.width * p.width;
  for (std::size_t i = 0; i < g.size(); ++i) {
    Point x = g.position(i);
    double v = p.height;
    for (const auto& c : p.centers) {
      double s = 0;
      for (int a = 0; a < g.dim(); ++a) s += sin_sq(x[a] - c[a]);
      v *= -std::expm1(-s / w2);
    }
    u[i] = v;
  }
  return u;
}

ScalarField sample_flat_profile(const FlatProfilePotential& p, const PeriodicGrid& g) {
  if (p.flat_order < 0) throw std::invalid_argument("flat_profile order must be non-negative");
  ScalarField u(g);
  double expo = 0.5 * (p.flat_order + 1);
  int axes = p.hyperplane ? 1 : g.dim();
  for (std::size_t i = 0; i < g.size(); ++i) {
    Point x = g.position(i);
    double s = 0;
    for (int a = 0; a < axes; ++a) s += sin_sq(x[a] - p.center[a]);
    u[i] = p.amplitude * std::pow(s, expo);
  }
  return u;
}

std::vector<double> cantor_endpoints(const CantorFlatPotential& p) {
  std::vector<std::pair<double, double>> iv{{p.base_lo, p.base_hi}};
  for (int k = 0; k < p.level; ++k) {
    std::vector<std::pair<double, double>> next;
    for (auto [a, b] : iv) {
      double third = (b - a) / 3;
      next.push_back({a, a + third});
      next.push_back({b - third, b});
    }
    iv.swap(next);
  }
  std::vector<double> pts;
  for (auto [a, b] : iv) {
    pts.push_back(a);
    pts.push_back(b);
  }
  return pts;
}

ScalarField sample_cantor(const CantorFlatPotential& p, const PeriodicGrid& g) {
  std::vector<std::size_t> zeros = cantor_zero_nodes(p, g);
  const int n = g.n();
  ScalarField u(g);
  int expo = p.flat_order + 1;
  for (std::size_t k = 0; k < zeros.size(); ++k) {
    long a = static_cast<long>(zeros[k]);
    long b = k + 1 < zeros.size() ? static_cast<long>(zeros[k + 1]) : static_cast<long>(zeros[0]) + n;
    double gap = static_cast<double>(b - a) / n;
    for (long j = a + 1; j < b; ++j) {
      double l = static_cast<double>(j - a) / n;
      double r = static_cast<double>(b - j) / n;
      u[static_cast<std::size_t>(j % n)] = std::pow(l * r / gap, expo);
    }
  }
  return u;
}

}  // namespace

std::string family_name(const PotentialSpec& spec) {
  static const char* names[] = {"zero", "trig", "two_well", "cantor_flat", "flat_profile"};
  return names[spec.index()];
}

std::vector<std::size_t> cantor_zero_nodes(const CantorFlatPotential& p, const PeriodicGrid& g) {
  if (g.dim() != 1) throw std::invalid_argument("cantor_flat is defined on T^1 only");
  if (p.level < 0) throw std::invalid_argument("cantor_flat level must be non-negative");
  if (p.flat_order < 0) throw std::invalid_argument("cantor_flat order must be non-negative");
  if (!(0 <= p.base_lo && p.base_lo < p.base_hi && p.base_hi < 1))
    throw std::invalid_argument("cantor_flat base interval must satisfy 0 <= lo < hi < 1");
  const int n = g.n();
  std::vector<std::size_t> nodes;
  for (double x : cantor_endpoints(p)) nodes.push_back(static_cast<std::size_t>(g.wrap(static_cast<int>(std::lround(x * n)))));
  std::sort(nodes.begin(), nodes.end());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    std::size_t next = k + 1 < nodes.size() ? nodes[k + 1] : nodes[0] + n;
    if (next - nodes[k] < 2)
      throw std::invalid_argument("cantor_flat level " + std::to_string(p.level) + " is unresolvable on n=" +
                                  std::to_string(n) + ": gaps shorter than 2 spacings");
  }
  return nodes;
}

ScalarField sample_potential(const PotentialSpec& spec, const PeriodicGrid& g) {
  return std::visit(
      [&](const auto& p) -> ScalarField {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ZeroPotential>) return ScalarField(g, 0.0);
        else if constexpr (std::is_same_v<T, TrigPotential>) return sample_trig(p, g);
        else if constexpr (std::is_same_v<T, TwoWellPotential>) return sample_two_well(p, g);
        else if constexpr (std::is_same_v<T, CantorFlatPotential>) return sample_cantor(p, g);
        else return sample_flat_profile(p, g);
      },
      spec);
}

}  // namespace wkam
