#include "wkam/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wkam/action_graph.hpp"
#include "wkam/error.hpp"

namespace wkam {
namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(path, path + ": expected an object");
  for (const auto& [k, v] : obj.items())
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
      throw ConfigError(join(path, k), join(path, k) + ": unknown field");
}

double get_double(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, path + ": expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, path + ": expected an integer");
  return j.get<int>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, path + ": expected a string");
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, path + ": expected a boolean");
  return j.get<bool>();
}

template <class F>
void opt(const json& obj, const char* key, const std::string& path, F&& f) {
  if (obj.contains(key) && !obj.at(key).is_null()) f(obj.at(key), join(path, key));
}

Point get_point(const json& j, const std::string& path, int d, double pad) {
  if (!j.is_array() || static_cast<int>(j.size()) != d)
    throw ConfigError(path, path + ": expected an array of " + std::to_string(d) + " numbers");
  Point p{pad, pad, pad};
  for (int a = 0; a < d; ++a) p[a] = get_double(j[a], path + "[" + std::to_string(a) + "]");
  return p;
}

Coord get_coord(const json& j, const std::string& path, int d) {
  if (!j.is_array() || static_cast<int>(j.size()) != d)
    throw ConfigError(path, path + ": expected an array of " + std::to_string(d) + " integers");
  Coord c{0, 0, 0};
  for (int a = 0; a < d; ++a) c[a] = get_int(j[a], path + "[" + std::to_string(a) + "]");
  return c;
}

std::vector<TrigTerm> get_terms(const json& j, const std::string& path, int d) {
  if (!j.is_array()) throw ConfigError(path, path + ": expected an array");
  std::vector<TrigTerm> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string p = path + "[" + std::to_string(i) + "]";
    only_keys(j[i], p, {"amplitude", "wavevector", "phase"});
    TrigTerm t;
    opt(j[i], "amplitude", p, [&](const json& v, const std::string& q) { t.amplitude = get_double(v, q); });
    opt(j[i], "wavevector", p, [&](const json& v, const std::string& q) { t.wavevector = get_coord(v, q, d); });
    opt(j[i], "phase", p, [&](const json& v, const std::string& q) { t.phase = get_double(v, q); });
    out.push_back(t);
  }
  return out;
}

json point_json(const Point& p, int d) { return std::vector<double>(p.begin(), p.begin() + d); }
json coord_json(const Coord& c, int d) { return std::vector<int>(c.begin(), c.begin() + d); }

json terms_json(const std::vector<TrigTerm>& terms, int d) {
  json a = json::array();
  for (const TrigTerm& t : terms)
    a.push_back({{"amplitude", t.amplitude}, {"wavevector", coord_json(t.wavevector, d)}, {"phase", t.phase}});
  return a;
}

PotentialSpec parse_potential(const std::string& family, const json& params, int d) {
  const std::string path = "model.params";
  json p = params.is_null() ? json::object() : params;
  if (family == "zero") {
    only_keys(p, path, {});
    return ZeroPotential{};
  }
  if (family == "trig") {
    only_keys(p, path, {"offset", "terms"});
    TrigPotential t;
    opt(p, "offset", path, [&](const json& v, const std::string& q) { t.offset = get_double(v, q); });
    opt(p, "terms", path, [&](const json& v, const std::string& q) { t.terms = get_terms(v, q, d); });
    return t;
  }
  if (family == "two_well") {
    only_keys(p, path, {"centers", "width", "height"});
    TwoWellPotential t;
    opt(p, "centers", path, [&](const json& v, const std::string& q) {
      if (!v.is_array() || v.size() != 2) throw ConfigError(q, q + ": expected two centers");
      for (int k = 0; k < 2; ++k) t.centers[k] = get_point(v[k], q + "[" + std::to_string(k) + "]", d, 0.5);
    });
    opt(p, "width", path, [&](const json& v, const std::string& q) { t.width = get_double(v, q); });
    opt(p, "height", path, [&](const json& v, const std::string& q) { t.height = get_double(v, q); });
    if (t.width <= 0) throw ConfigError(path + ".width", "model.params.width must be positive");
    return t;
  }
  if (family == "cantor_flat") {
    only_keys(p, path, {"level", "flat_order", "base"});
    CantorFlatPotential t;
    opt(p, "level", path, [&](const json& v, const std::string& q) { t.level = get_int(v, q); });
    opt(p, "flat_order", path, [&](const json& v, const std::string& q) { t.flat_order = get_int(v, q); });
    opt(p, "base", path, [&](const json& v, const std::string& q) {
      Point b = get_point(v, q, 2, 0);
      t.base_lo = b[0];
      t.base_hi = b[1];
    });
    if (d != 1) throw ConfigError("model.family", "cantor_flat requires grid.d = 1");
    if (t.level < 0) throw ConfigError(path + ".level", "model.params.level must be non-negative");
    if (t.flat_order < 0) throw ConfigError(path + ".flat_order", "model.params.flat_order must be non-negative");
    return t;
  }
  if (family == "flat_profile") {
    only_keys(p, path, {"flat_order", "center", "amplitude", "hyperplane"});
    FlatProfilePotential t;
    opt(p, "flat_order", path, [&](const json& v, const std::string& q) { t.flat_order = get_int(v, q); });
    opt(p, "center", path, [&](const json& v, const std::string& q) { t.center = get_point(v, q, d, 0); });
    opt(p, "amplitude", path, [&](const json& v, const std::string& q) { t.amplitude = get_double(v, q); });
    opt(p, "hyperplane", path, [&](const json& v, const std::string& q) { t.hyperplane = get_bool(v, q); });
    if (t.flat_order < 0) throw ConfigError(path + ".flat_order", "model.params.flat_order must be non-negative");
    return t;
  }
  throw ConfigError("model.family", "model.family: unknown potential family '" + family + "'");
}

json potential_params(const PotentialSpec& spec, int d) {
  return std::visit(
      [&](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ZeroPotential>) return json::object();
        else if constexpr (std::is_same_v<T, TrigPotential>)
          return {{"offset", p.offset}, {"terms", terms_json(p.terms, d)}};
        else if constexpr (std::is_same_v<T, TwoWellPotential>)
          return {{"centers", {point_json(p.centers[0], d), point_json(p.centers[1], d)}},
                  {"width", p.width},
                  {"height", p.height}};
        else if constexpr (std::is_same_v<T, CantorFlatPotential>)
          return {{"level", p.level}, {"flat_order", p.flat_order}, {"base", {p.base_lo, p.base_hi}}};
        else
          return {{"flat_order", p.flat_order},
                  {"center", point_json(p.center, d)},
                  {"amplitude", p.amplitude},
                  {"hyperplane", p.hyperplane}};
      },
      spec);
}

ModelKind parse_kind(const std::string& s) {
  for (ModelKind k : {ModelKind::mechanical, ModelKind::symmetric_quadratic, ModelKind::linear_drift})
    if (s == to_string(k)) return k;
  throw ConfigError("model.kind", "model.kind: unknown model kind '" + s + "'");
}

ExperimentConfig from_json(const json& j) {
  only_keys(j, "", {"grid", "model", "stages", "stencil", "tolerances", "sard", "whitney", "output_dir", "seed",
                    "threads"});
  ExperimentConfig c;
  if (!j.contains("grid")) throw ConfigError("grid", "grid: required");
  const json& g = j.at("grid");
  only_keys(g, "grid", {"d", "n"});
  if (!g.contains("d") || !g.contains("n")) throw ConfigError("grid", "grid: d and n are required");
  c.grid.d = get_int(g.at("d"), "grid.d");
  c.grid.n = get_int(g.at("n"), "grid.n");
  if (c.grid.d < 1 || c.grid.d > 3) throw ConfigError("grid.d", "grid.d: must be 1, 2 or 3");
  if (c.grid.n < 4) throw ConfigError("grid.n", "grid.n: must be at least 4");
  const int d = c.grid.d;

  if (j.contains("model")) {
    const json& m = j.at("model");
    only_keys(m, "model", {"kind", "family", "params", "eta", "gamma"});
    opt(m, "kind", "model", [&](const json& v, const std::string& q) { c.model.kind = parse_kind(get_string(v, q)); });
    std::string family = "zero";
    opt(m, "family", "model", [&](const json& v, const std::string& q) { family = get_string(v, q); });
    c.model.potential = parse_potential(family, m.contains("params") ? m.at("params") : json(), d);
    opt(m, "gamma", "model", [&](const json& v, const std::string& q) { c.model.gamma = get_double(v, q); });
    opt(m, "eta", "model", [&](const json& e, const std::string& q) {
      only_keys(e, q, {"c", "f_modes"});
      opt(e, "c", q, [&](const json& v, const std::string& qq) {
        Point p = get_point(v, qq, d, 0);
        c.model.eta_c.assign(p.begin(), p.begin() + d);
      });
      opt(e, "f_modes", q, [&](const json& v, const std::string& qq) { c.model.eta_f_modes = get_terms(v, qq, d); });
    });
  }
  opt(j, "stages", "", [&](const json& v, const std::string& q) {
    if (!v.is_array()) throw ConfigError(q, "stages: expected an array of stage names");
    c.stages.clear();
    for (std::size_t i = 0; i < v.size(); ++i) c.stages.push_back(get_string(v[i], q + "[" + std::to_string(i) + "]"));
  });
  opt(j, "stencil", "", [&](const json& v, const std::string& q) { c.stencil = get_string(v, q); });
  opt(j, "tolerances", "", [&](const json& t, const std::string& q) {
    only_keys(t, q, {"tol_aubry", "tol_class", "kappa", "critical"});
    opt(t, "tol_aubry", q, [&](const json& v, const std::string& p) { c.tolerances.tol_aubry = get_double(v, p); });
    opt(t, "tol_class", q, [&](const json& v, const std::string& p) { c.tolerances.tol_class = get_double(v, p); });
    opt(t, "kappa", q, [&](const json& v, const std::string& p) { c.tolerances.kappa = get_double(v, p); });
    opt(t, "critical", q, [&](const json& v, const std::string& p) { c.tolerances.critical = get_double(v, p); });
  });
  opt(j, "sard", "", [&](const json& s, const std::string& q) {
    only_keys(s, q, {"u", "A", "N", "ladder", "s_max"});
    opt(s, "u", q, [&](const json& v, const std::string& p) { c.sard.u = get_string(v, p); });
    opt(s, "A", q, [&](const json& v, const std::string& p) { c.sard.A = get_string(v, p); });
    opt(s, "N", q, [&](const json& v, const std::string& p) { c.sard.N = get_int(v, p); });
    opt(s, "s_max", q, [&](const json& v, const std::string& p) { c.sard.s_max = get_int(v, p); });
    opt(s, "ladder", q, [&](const json& v, const std::string& p) {
      if (!v.is_array()) throw ConfigError(p, p + ": expected an array");
      c.sard.ladder.clear();
      for (std::size_t i = 0; i < v.size(); ++i) c.sard.ladder.push_back(get_int(v[i], p + "[" + std::to_string(i) + "]"));
    });
  });
  opt(j, "whitney", "", [&](const json& w, const std::string& q) {
    only_keys(w, q, {"lo", "side", "mask", "density", "r", "s", "refine", "samples"});
    opt(w, "lo", q, [&](const json& v, const std::string& p) { c.whitney.lo = get_coord(v, p, d); });
    opt(w, "side", q, [&](const json& v, const std::string& p) { c.whitney.side = get_int(v, p); });
    opt(w, "mask", q, [&](const json& v, const std::string& p) { c.whitney.mask = get_string(v, p); });
    opt(w, "density", q, [&](const json& v, const std::string& p) { c.whitney.density = get_double(v, p); });
    opt(w, "r", q, [&](const json& v, const std::string& p) { c.whitney.r = get_int(v, p); });
    opt(w, "s", q, [&](const json& v, const std::string& p) { c.whitney.s = get_int(v, p); });
    opt(w, "refine", q, [&](const json& v, const std::string& p) { c.whitney.refine = get_int(v, p); });
    opt(w, "samples", q, [&](const json& v, const std::string& p) { c.whitney.samples = get_int(v, p); });
  });
  opt(j, "output_dir", "", [&](const json& v, const std::string& q) { c.output_dir = get_string(v, q); });
  opt(j, "seed", "", [&](const json& v, const std::string& q) {
    if (!v.is_number_unsigned()) throw ConfigError(q, "seed: expected a non-negative integer");
    c.seed = v.get<std::uint64_t>();
  });
  opt(j, "threads", "", [&](const json& v, const std::string& q) { c.threads = get_int(v, q); });
  validate(c);
  return c;
}

}  // namespace

const std::vector<std::string>& known_stages() {
  static const std::vector<std::string> s{"alpha", "barrier", "aubry", "quotient", "subsol", "sard", "sweep", "whitney"};
  return s;
}

void validate(const ExperimentConfig& c) {
  const int d = c.grid.d;
  if (d < 1 || d > 3) throw ConfigError("grid.d", "grid.d: must be 1, 2 or 3");
  if (c.grid.n < 4) throw ConfigError("grid.n", "grid.n: must be at least 4");
  for (std::size_t i = 0; i < c.stages.size(); ++i) {
    const std::string& s = c.stages[i];
    if (s != "all" && std::find(known_stages().begin(), known_stages().end(), s) == known_stages().end())
      throw ConfigError("stages[" + std::to_string(i) + "]", "stages: unknown stage '" + s + "'");
  }
  try {
    parse_stencil(c.stencil);
  } catch (const std::exception& e) {
    throw ConfigError("stencil", std::string("stencil: ") + e.what());
  }
  auto positive = [](const std::optional<double>& v, const char* path) {
    if (v && !(*v > 0)) throw ConfigError(path, std::string(path) + ": must be positive");
  };
  positive(c.tolerances.tol_aubry, "tolerances.tol_aubry");
  positive(c.tolerances.tol_class, "tolerances.tol_class");
  positive(c.tolerances.kappa, "tolerances.kappa");
  positive(c.tolerances.critical, "tolerances.critical");
  if (c.tolerances.tol_class && c.tolerances.tol_aubry && *c.tolerances.tol_class < *c.tolerances.tol_aubry)
    throw ConfigError("tolerances.tol_class", "tolerances.tol_class: must be at least tol_aubry");
  if (!(c.model.gamma > 0)) throw ConfigError("model.gamma", "model.gamma: must be positive");
  if (!c.model.eta_c.empty() && static_cast<int>(c.model.eta_c.size()) != d)
    throw ConfigError("model.eta.c", "model.eta.c: length must equal grid.d");
  bool eta_zero = std::all_of(c.model.eta_c.begin(), c.model.eta_c.end(), [](double v) { return v == 0; }) &&
                  std::all_of(c.model.eta_f_modes.begin(), c.model.eta_f_modes.end(),
                              [](const TrigTerm& t) { return t.amplitude == 0; });
  if (c.model.kind != ModelKind::linear_drift && !eta_zero)
    throw ConfigError("model.eta", "model.eta: only linear_drift models carry a nonzero form");
  if (c.sard.u != "subsolution" && c.sard.u != "potential" && c.sard.u != "constant")
    throw ConfigError("sard.u", "sard.u: expected subsolution, potential or constant");
  if (c.sard.A != "aubry" && c.sard.A != "min_set" && c.sard.A != "all")
    throw ConfigError("sard.A", "sard.A: expected aubry, min_set or all");
  if (c.sard.N < 1) throw ConfigError("sard.N", "sard.N: must be positive");
  for (std::size_t i = 0; i < c.sard.ladder.size(); ++i)
    if (c.sard.ladder[i] < 1) throw ConfigError("sard.ladder[" + std::to_string(i) + "]", "sard.ladder: must be positive");
  if (c.sard.s_max < 0) throw ConfigError("sard.s_max", "sard.s_max: must be non-negative");
  const WhitneySpec& w = c.whitney;
  if (w.side < 1 || (w.side & (w.side - 1)) != 0) throw ConfigError("whitney.side", "whitney.side: must be a power of two");
  bool wants_whitney = std::find(c.stages.begin(), c.stages.end(), "whitney") != c.stages.end() ||
                       std::find(c.stages.begin(), c.stages.end(), "all") != c.stages.end();
  for (int a = 0; a < d && wants_whitney; ++a)
    if (w.lo[a] < 0 || w.lo[a] + w.side >= c.grid.n)
      throw ConfigError("whitney.lo", "whitney.lo: W1 must fit inside one period (lo + side < n)");
  if (w.mask != "random" && w.mask != "zero_set") throw ConfigError("whitney.mask", "whitney.mask: expected random or zero_set");
  if (!(w.density > 0 && w.density <= 1)) throw ConfigError("whitney.density", "whitney.density: must be in (0, 1]");
  if (w.s < 0 || w.r <= w.s) throw ConfigError("whitney.r", "whitney.r: must exceed whitney.s >= 0");
  if (w.refine < 0 || w.refine > 10) throw ConfigError("whitney.refine", "whitney.refine: must be in [0, 10]");
  if (w.samples < 1) throw ConfigError("whitney.samples", "whitney.samples: must be positive");
  if (c.threads < 1) throw ConfigError("threads", "threads: must be at least 1");
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("", "parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                              e.what());
  }
  return from_json(j);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("", "cannot open config file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  const int d = c.grid.d;
  json tol = {{"kappa", c.tolerances.kappa}, {"critical", c.tolerances.critical}};
  tol["tol_aubry"] = c.tolerances.tol_aubry ? json(*c.tolerances.tol_aubry) : json();
  tol["tol_class"] = c.tolerances.tol_class ? json(*c.tolerances.tol_class) : json();
  json j = {
      {"grid", {{"d", d}, {"n", c.grid.n}}},
      {"model",
       {{"kind", to_string(c.model.kind)},
        {"family", family_name(c.model.potential)},
        {"params", potential_params(c.model.potential, d)},
        {"eta", {{"c", c.model.eta_c.empty() ? json() : json(c.model.eta_c)}, {"f_modes", terms_json(c.model.eta_f_modes, d)}}},
        {"gamma", c.model.gamma}}},
      {"stages", c.stages},
      {"stencil", c.stencil},
      {"tolerances", tol},
      {"sard", {{"u", c.sard.u}, {"A", c.sard.A}, {"N", c.sard.N}, {"ladder", c.sard.ladder}, {"s_max", c.sard.s_max}}},
      {"whitney",
       {{"lo", coord_json(c.whitney.lo, d)},
        {"side", c.whitney.side},
        {"mask", c.whitney.mask},
        {"density", c.whitney.density},
        {"r", c.whitney.r},
        {"s", c.whitney.s},
        {"refine", c.whitney.refine},
        {"samples", c.whitney.samples}}},
      {"output_dir", c.output_dir},
      {"seed", c.seed},
      {"threads", c.threads}};
  return j.dump(2) + "\n";
}

LagrangianModel build_model(const ExperimentConfig& c) {
  PeriodicGrid grid = build_grid(c.grid.d, c.grid.n);
  ScalarField U = sample_potential(c.model.potential, grid);
  std::vector<double> cc = c.model.eta_c;
  if (cc.empty()) cc.assign(c.grid.d, 0.0);
  ScalarField f = sample_potential(TrigPotential{0.0, c.model.eta_f_modes}, grid);
  try {
    return make_model(c.model.kind, std::move(U), closed_form(std::move(cc), std::move(f)), c.model.gamma);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("model", std::string("model: ") + e.what());
  }
}

}  // namespace wkam
