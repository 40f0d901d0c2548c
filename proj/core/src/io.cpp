#include "wkam/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace wkam::io {
namespace {

using nlohmann::json;

json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw std::runtime_error("AKBM: truncated header");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::string dump(const json& j) {
  // nlohmann prints doubles with round-trip precision.
  return j.dump(2) + "\n";
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field_csv(std::ostream& os, const ScalarField& f) {
  const PeriodicGrid& g = f.grid();
  os << "index";
  for (int a = 0; a < g.dim(); ++a) os << ",x" << a;
  os << ",value\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    Point p = g.position(i);
    os << i;
    for (int a = 0; a < g.dim(); ++a) os << ',' << format_double(p[a]);
    os << ',' << format_double(f[i]) << '\n';
  }
}

ScalarField read_field_csv(std::istream& is, const PeriodicGrid& grid) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("field CSV: missing header");
  std::vector<double> values(grid.size(), std::nan(""));
  std::vector<char> seen(grid.size(), 0);
  std::size_t count = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::size_t idx = std::stoull(line.substr(0, line.find(',')));
    if (idx >= grid.size()) throw std::runtime_error("field CSV: index out of range");
    values[idx] = std::stod(line.substr(line.rfind(',') + 1));
    count += !seen[idx];
    seen[idx] = 1;
  }
  if (count != grid.size()) throw std::runtime_error("field CSV: missing nodes");
  return ScalarField(grid, std::move(values));
}

void write_barrier_csv(std::ostream& os, const BarrierMatrix& m) {
  os << "source,target,value\n";
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      os << m.sources()[r] << ',' << c << ',' << format_double(m.at(r, c)) << '\n';
}

void write_akbm(std::ostream& os, const BarrierMatrix& m) {
  os.write("AKBM", 4);
  put_u32(os, static_cast<std::uint32_t>(m.rows()));
  put_u32(os, static_cast<std::uint32_t>(m.cols()));
  for (double v : m.values()) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
  }
}

DenseMatrix read_akbm(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "AKBM", 4) != 0) throw std::runtime_error("AKBM: bad magic");
  DenseMatrix m;
  m.rows = get_u32(is);
  m.cols = get_u32(is);
  m.values.resize(static_cast<std::size_t>(m.rows) * m.cols);
  for (double& v : m.values) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("AKBM: truncated payload");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    v = std::bit_cast<double>(bits);
  }
  return m;
}

std::string quotient_json(const QuotientSpace& q, const ComponentReport& report) {
  json classes = json::array();
  for (std::size_t p = 0; p < q.size(); ++p)
    classes.push_back({{"id", p}, {"members", q.classes[p]}, {"representative", q.representatives[p]}});
  json db = json::array();
  for (std::size_t p = 0; p < q.size(); ++p) {
    json row = json::array();
    for (std::size_t r = 0; r < q.size(); ++r) row.push_back(number(q.at(p, r)));
    db.push_back(row);
  }
  json eps = json::array(), comps = json::array(), diam = json::array();
  for (const ComponentRung& r : report.rungs) {
    eps.push_back(number(r.epsilon));
    comps.push_back(r.components);
    diam.push_back(number(r.max_diameter));
  }
  json rep = {{"epsilon", eps}, {"components", comps}, {"max_diameter", diam}};
  if (report.disconnected_at) rep["disconnected_at"] = *report.disconnected_at;
  json j = {{"classes", classes}, {"delta_bar", db}, {"tol_class", q.tol_class}, {"report", rep}};
  return dump(j);
}

void write_quotient_csv(std::ostream& os, const QuotientSpace& q) {
  os << "class_p,class_q,delta_bar,spread\n";
  for (std::size_t p = 0; p < q.size(); ++p)
    for (std::size_t r = 0; r < q.size(); ++r)
      os << p << ',' << r << ',' << format_double(q.at(p, r)) << ',' << format_double(q.spread_at(p, r)) << '\n';
}

std::string cube_cover_json(const CubeCover& cover, const PeriodicGrid& grid) {
  json cubes = json::array();
  for (const CoverCube& c : cover.cubes) {
    json corner = json::array();
    for (int a = 0; a < grid.dim(); ++a) corner.push_back(c.corner[a] * grid.spacing());
    cubes.push_back({{"corner", corner},
                     {"edge", c.edge_nodes * grid.spacing()},
                     {"interval", {number(c.lo), number(c.hi)}}});
  }
  json j = {{"subdivisions", cover.subdivisions},
            {"union_length", number(cover.union_length)},
            {"sum_of_widths", number(cover.sum_of_widths)},
            {"cubes", cubes}};
  return dump(j);
}

void write_cube_cover_csv(std::ostream& os, const CubeCover& cover, const PeriodicGrid& grid) {
  for (int a = 0; a < grid.dim(); ++a) os << "corner" << a << ',';
  os << "edge,lo,hi\n";
  for (const CoverCube& c : cover.cubes) {
    for (int a = 0; a < grid.dim(); ++a) os << format_double(c.corner[a] * grid.spacing()) << ',';
    os << format_double(c.edge_nodes * grid.spacing()) << ',' << format_double(c.lo) << ',' << format_double(c.hi)
       << '\n';
  }
}

std::string whitney_json(const WhitneyDecomposition& dec) {
  const int d = dec.grid.dim();
  json cubes = json::array();
  for (const WhitneyCube& c : dec.cubes) {
    json corner = json::array();
    for (int a = 0; a < d; ++a) corner.push_back(c.lo[a]);
    cubes.push_back({{"corner", corner}, {"edge", c.edge}, {"distance", c.dist}, {"anchor", c.anchor}});
  }
  const WhitneyProperties& P = dec.properties;
  json props = {{"overlapping_pairs", P.overlapping_pairs},
                {"disjoint_interiors", P.disjoint_interiors},
                {"uncovered_nodes", P.uncovered_nodes},
                {"covers_nodes", P.covers_nodes},
                {"edge_over_dist", {number(P.edge_over_dist_min), number(P.edge_over_dist_max)}},
                {"dilated_dist_over_edge", {number(P.dilated_min), number(P.dilated_max)}},
                {"neighbor_edge_over_dist", {number(P.neighbor_min), number(P.neighbor_max)}},
                {"overlap", P.overlap}};
  json j = {{"lambda", dec.lambda},
            {"domain", {{"lo", std::vector<int>(dec.domain.lo.begin(), dec.domain.lo.begin() + d)},
                        {"side", dec.domain.side}}},
            {"anchors", dec.anchor_nodes},
            {"residual_cubes", dec.residual.size()},
            {"properties", props},
            {"cubes", cubes}};
  return dump(j);
}

void write_whitney_csv(std::ostream& os, const WhitneyDecomposition& dec) {
  const int d = dec.grid.dim();
  for (int a = 0; a < d; ++a) os << "corner" << a << ',';
  os << "edge,distance,anchor\n";
  for (const WhitneyCube& c : dec.cubes) {
    for (int a = 0; a < d; ++a) os << format_double(c.lo[a]) << ',';
    os << format_double(c.edge) << ',' << format_double(c.dist) << ',' << c.anchor << '\n';
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace wkam::io
