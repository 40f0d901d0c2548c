#include "wkam/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wkam/action_graph.hpp"
#include "wkam/aubry.hpp"
#include "wkam/barrier.hpp"
#include "wkam/critical_value.hpp"
#include "wkam/cube_cover.hpp"
#include "wkam/error.hpp"
#include "wkam/extension.hpp"
#include "wkam/io.hpp"
#include "wkam/subsolution.hpp"
#include "wkam/whitney.hpp"

namespace wkam {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::size_t kFullBarrierNodes = 2048;
constexpr std::size_t kMaxSampledSubsolutions = 8;

json number(double v) {
  if (std::isfinite(v)) return v;
  return io::format_double(v);
}

struct Context {
  Context(const ExperimentConfig& c, fs::path o, LagrangianModel m) : cfg(c), out(std::move(o)), model(std::move(m)) {}

  const ExperimentConfig& cfg;
  fs::path out;
  LagrangianModel model;
  StencilKind stencil = StencilKind::standard;
  std::optional<CriticalValue> alpha;
  std::optional<double> closed_form;
  std::optional<ActionGraph> graph;
  std::vector<std::size_t> critical;
  std::vector<double> diagonal;
  std::optional<BarrierMatrix> h;
  std::optional<AubrySet> aubry;
  std::optional<Pseudometric> delta;
  std::optional<QuotientSpace> q;
  std::optional<ComponentReport> components;

  double tol_aubry() const {
    return cfg.tolerances.tol_aubry.value_or(default_tol_aubry(model.potential, alpha->alpha));
  }
  double tol_class() const { return std::max(cfg.tolerances.tol_class.value_or(tol_aubry()), tol_aubry()); }
};

void emit(Context& ctx, StageRecord& rec, const std::string& name, const std::string& text) {
  io::write_text(ctx.out / name, text);
  rec.outputs.push_back(name);
}

template <class F>
void emit_stream(Context& ctx, StageRecord& rec, const std::string& name, F&& write) {
  std::ostringstream os;
  write(os);
  emit(ctx, rec, name, os.str());
}

std::string fmt(double v) { return io::format_double(v); }

void stage_alpha(Context& ctx, StageRecord& rec) {
  const LagrangianModel& m = ctx.model;
  bool mechanical = m.kind != ModelKind::linear_drift;
  CriticalValue ratio = critical_value_ratio_cycle(m, ctx.stencil, ctx.cfg.tolerances.critical);
  if (mechanical) {
    CriticalValue cf = critical_value_closed_form(m);
    ctx.closed_form = cf.alpha;
    rec.values["closed_form"] = cf.alpha;
    if (std::abs(cf.alpha - ratio.alpha) > 1e-6)
      throw NumericalInconsistency("closed-form and ratio-cycle critical values disagree: " + fmt(cf.alpha) + " vs " +
                                   fmt(ratio.alpha));
    ctx.alpha = cf;
  } else {
    ctx.alpha = ratio;
  }
  rec.values["alpha"] = ctx.alpha->alpha;
  rec.values["ratio_cycle"] = ratio.alpha;
  json j = {{"alpha", ctx.alpha->alpha},
            {"method", to_string(ctx.alpha->method)},
            {"ratio_cycle", {{"alpha", ratio.alpha},
                             {"iterations", ratio.iterations},
                             {"bracket", {ratio.bracket_lo, ratio.bracket_hi}},
                             {"certificate_nodes", ratio.certificate.nodes}}},
            {"stencil", to_string(ctx.stencil)}};
  if (ctx.closed_form) j["closed_form"] = *ctx.closed_form;
  emit(ctx, rec, "alpha.json", j.dump(2) + "\n");
  rec.summary = "alpha=" + fmt(ctx.alpha->alpha) + " (" + to_string(ctx.alpha->method) + ")";
}

void stage_barrier(Context& ctx, StageRecord& rec) {
  const int threads = ctx.cfg.threads;
  ctx.graph = build_action_graph(ctx.model, ctx.alpha->alpha, ctx.stencil);
  const ActionGraph& g = *ctx.graph;
  ctx.critical = critical_nodes(g);
  if (ctx.critical.empty()) throw NumericalInconsistency("no zero-cost cycle at the critical level");
  ctx.diagonal = peierls_diagonal(g, ctx.critical, threads);

  const std::size_t V = g.grid.size();
  std::set<std::size_t> rows(ctx.critical.begin(), ctx.critical.end());
  if (V <= kFullBarrierNodes) {
    for (std::size_t x = 0; x < V; ++x) rows.insert(x);
  } else {
    double tol = ctx.tol_aubry();
    for (std::size_t x = 0; x < V; ++x)
      if (ctx.diagonal[x] <= std::max(tol, ctx.tol_class())) rows.insert(x);
  }
  std::vector<std::size_t> sources(rows.begin(), rows.end());
  BarrierMatrix phi = mane_potential(g, sources, threads);
  ctx.h = peierls_barrier(phi, ctx.critical);

  emit_stream(ctx, rec, "barrier.csv", [&](std::ostream& os) { io::write_barrier_csv(os, *ctx.h); });
  {
    std::ostringstream os(std::ios::binary);
    io::write_akbm(os, *ctx.h);
    emit(ctx, rec, "barrier.akbm", os.str());
  }
  std::vector<double> diag = ctx.diagonal;
  emit_stream(ctx, rec, "peierls_diagonal.csv",
              [&](std::ostream& os) { io::write_field_csv(os, ScalarField(g.grid, std::move(diag))); });
  rec.values["rows"] = static_cast<double>(ctx.h->rows());
  rec.values["critical_nodes"] = static_cast<double>(ctx.critical.size());
  rec.summary = std::to_string(ctx.h->rows()) + " barrier rows, " + std::to_string(ctx.critical.size()) +
                " critical nodes, stencil " + to_string(ctx.stencil);
}

void stage_aubry(Context& ctx, StageRecord& rec) {
  double tol = ctx.tol_aubry();
  ctx.aubry = aubry_set_from_diagonal(ctx.graph->grid, ctx.diagonal, tol,
                                      ctx.model.kind == ModelKind::linear_drift ? nullptr : &ctx.model.potential);
  const AubrySet& A = *ctx.aubry;
  json j = {{"nodes", A.nodes},
            {"tol_aubry", tol},
            {"min_residual_outside", number(A.min_residual_outside)},
            {"outside_min_set", A.outside_min_set}};
  emit(ctx, rec, "aubry.json", j.dump(2) + "\n");
  rec.values["size"] = static_cast<double>(A.nodes.size());
  rec.values["tol_aubry"] = tol;
  rec.summary = std::to_string(A.nodes.size()) + " Aubry nodes at tol_aubry=" + fmt(tol);
  if (!A.outside_min_set.empty())
    rec.summary += ", " + std::to_string(A.outside_min_set.size()) + " outside {U = min U}";
}

void stage_quotient(Context& ctx, StageRecord& rec) {
  ctx.delta = delta_pseudometric(*ctx.h);
  ctx.q = quotient(*ctx.delta, *ctx.aubry, ctx.tol_class());
  std::vector<double> ladder = default_epsilon_ladder(*ctx.q);
  ctx.components = disconnectedness_scan(*ctx.q, ladder);
  emit(ctx, rec, "quotient.json", io::quotient_json(*ctx.q, *ctx.components));
  emit_stream(ctx, rec, "quotient.csv", [&](std::ostream& os) { io::write_quotient_csv(os, *ctx.q); });
  emit_stream(ctx, rec, "components.csv", [&](std::ostream& os) {
    os << "epsilon,components,max_diameter\n";
    for (const ComponentRung& r : ctx.components->rungs)
      os << fmt(r.epsilon) << ',' << r.components << ',' << fmt(r.max_diameter) << '\n';
  });
  rec.values["classes"] = static_cast<double>(ctx.q->size());
  rec.values["tol_class"] = ctx.q->tol_class;
  rec.summary = std::to_string(ctx.q->size()) + " static classes";
  if (ctx.components->disconnected_at) {
    rec.values["disconnected_at"] = *ctx.components->disconnected_at;
    rec.summary += ", disconnected at resolution " + fmt(*ctx.components->disconnected_at);
  }
}

void stage_subsol(Context& ctx, StageRecord& rec) {
  const QuotientSpace& q = *ctx.q;
  std::vector<std::size_t> sources;
  for (std::size_t p = 0; p < q.size() && sources.size() < kMaxSampledSubsolutions; ++p)
    sources.push_back(q.representatives[p]);
  std::vector<Subsolution> subs;
  json residuals = json::array();
  for (std::size_t z : sources) {
    subs.push_back(barrier_subsolution(*ctx.h, *ctx.graph, z));
    ResidualReport r = verify_subsolution(subs.back().u, ctx.model, ctx.alpha->alpha);
    residuals.push_back({{"source", z},
                         {"edge_violation", subs.back().max_violation},
                         {"max", r.max},
                         {"q50", r.q50},
                         {"q90", r.q90},
                         {"q99", r.q99},
                         {"constant", r.constant}});
  }
  emit_stream(ctx, rec, "subsolution.csv", [&](std::ostream& os) { io::write_field_csv(os, subs.front().u); });

  std::vector<std::size_t> rep_sources;
  const std::vector<std::size_t>& an = ctx.aubry->nodes;
  if (an.size() <= 64) rep_sources = an;
  else rep_sources = sources;
  RepresentationReport rep = representation_check(*ctx.h, *ctx.aubry, rep_sources, true);

  json evals = json::array();
  double sard_max = 0;
  bool lip_ok = true;
  for (std::size_t i = 1; i < subs.size(); ++i) {
    DifferenceFunction w = difference(subs[0].u, subs[i].u, ctx.cfg.tolerances.kappa);
    EvaluationMap e = evaluation_map(w, q);
    MorseSardEstimate ms = morse_sard_estimate(w);
    lip_ok &= e.lipschitz_ok;
    sard_max = std::max(sard_max, ms.bound);
    evals.push_back({{"pair", {sources[0], sources[i]}},
                     {"values", e.values},
                     {"lipschitz_excess", e.lipschitz_excess},
                     {"lipschitz_ok", e.lipschitz_ok},
                     {"morse_sard_bound", ms.bound},
                     {"critical_nodes", ms.critical_nodes}});
  }
  json j = {{"residuals", residuals},
            {"representation",
             {{"max_gap", rep.max_gap}, {"max_violation", rep.max_violation}, {"pairs", rep.pairs}, {"attained", rep.attained}}},
            {"evaluation_maps", evals},
            {"kappa", ctx.cfg.tolerances.kappa}};
  emit(ctx, rec, "subsolution.json", j.dump(2) + "\n");
  rec.values["representation_gap"] = rep.max_gap;
  rec.values["lipschitz_ok"] = lip_ok;
  rec.summary = std::to_string(subs.size()) + " barrier subsolutions, representation gap " + fmt(rep.max_gap) +
                ", evaluation maps " + (lip_ok ? "1-Lipschitz" : "NOT 1-Lipschitz");
}

std::pair<ScalarField, std::vector<char>> sard_inputs(Context& ctx) {
  const PeriodicGrid& grid = ctx.model.grid();
  const ScalarField& U = ctx.model.potential;
  ScalarField u(grid, 0.0);
  if (ctx.cfg.sard.u == "potential") u = U;
  else if (ctx.cfg.sard.u == "subsolution")
    u = barrier_subsolution(*ctx.h, *ctx.graph, ctx.aubry->nodes.front()).u;
  std::vector<char> A(grid.size(), 0);
  if (ctx.cfg.sard.A == "all") std::fill(A.begin(), A.end(), 1);
  else if (ctx.cfg.sard.A == "aubry")
    for (std::size_t x : ctx.aubry->nodes) A[x] = 1;
  else
    for (std::size_t x = 0; x < grid.size(); ++x) A[x] = U[x] == U.min();
  return {std::move(u), std::move(A)};
}

void stage_sard(Context& ctx, StageRecord& rec) {
  auto [u, A] = sard_inputs(ctx);
  CubeCover cover = image_measure_bound(u, A, ctx.cfg.sard.N);
  emit(ctx, rec, "sard_cover.json", io::cube_cover_json(cover, u.grid()));
  emit_stream(ctx, rec, "sard_cover.csv", [&](std::ostream& os) { io::write_cube_cover_csv(os, cover, u.grid()); });
  rec.values["measure_bound"] = cover.union_length;
  rec.summary = "image measure bound " + fmt(cover.union_length) + " with N=" + std::to_string(cover.subdivisions) +
                " (" + std::to_string(cover.cubes.size()) + " cubes)";
}

void stage_sweep(Context& ctx, StageRecord& rec) {
  auto [u, A] = sard_inputs(ctx);
  ScalingSweep s = scaling_sweep(u, ctx.model.potential, A, ctx.cfg.sard.ladder, ctx.cfg.sard.s_max);
  json bounds = json::array();
  for (double b : s.bounds) bounds.push_back(number(b));
  json j = {{"ladder", s.ladder},
            {"bounds", bounds},
            {"exact_zero", s.exact_zero},
            {"slope", s.slope ? json(*s.slope) : json()},
            {"flatness", s.flatness},
            {"predicted", s.predicted},
            {"within_tolerance", s.within_tolerance}};
  emit(ctx, rec, "sweep.json", j.dump(2) + "\n");
  if (s.exact_zero) {
    rec.summary = "image measure bound is 0 on every rung";
  } else {
    rec.values["slope"] = *s.slope;
    rec.summary = "fitted exponent " + fmt(*s.slope) + " (flatness s=" + std::to_string(s.flatness) + ")";
  }
  rec.values["predicted"] = s.predicted;
}

void stage_whitney(Context& ctx, StageRecord& rec) {
  const ExperimentConfig& cfg = ctx.cfg;
  const WhitneySpec& w = cfg.whitney;
  const PeriodicGrid& grid = ctx.model.grid();
  const int d = grid.dim();
  WhitneyDomain dom{w.lo, w.side};
  std::vector<char> mask(grid.size(), 0);
  const ScalarField& U0 = ctx.model.potential;
  std::mt19937_64 rng(cfg.seed);
  std::bernoulli_distribution coin(w.density);
  std::vector<std::size_t> inside;
  {
    WhitneyDecomposition probe;
    probe.grid = grid;
    probe.domain = dom;
    inside = probe.domain_nodes();
  }
  if (w.mask == "random") {
    for (std::size_t x : inside) mask[x] = coin(rng);
    if (std::none_of(inside.begin(), inside.end(), [&](std::size_t x) { return mask[x]; }))
      mask[inside[std::uniform_int_distribution<std::size_t>(0, inside.size() - 1)(rng)]] = 1;
  } else {
    for (std::size_t x : inside) mask[x] = U0[x] == U0.min();
  }
  WhitneyDecomposition dec = whitney_decompose(grid, dom, mask, cfg.seed, w.refine);
  PartitionOfUnity pou(dec, std::max(w.r, 4));
  PartitionReport pr = check_partition(pou, static_cast<std::size_t>(w.samples), cfg.seed);

  ScalarField target(grid, 0.0);
  std::vector<Jet> zero_jets;
  const std::vector<Jet>* jets = nullptr;
  if (w.mask == "random") {
    for (std::size_t y = 0; y < grid.size(); ++y) {
      double best = std::numeric_limits<double>::infinity();
      for (const Point& a : dec.anchors) best = std::min(best, torus_distance(grid.position(y), a, d));
      target[y] = std::pow(best, 2 * w.r);
    }
    auto set = std::make_shared<const MultiIndexSet>(d, w.r);
    zero_jets.assign(dec.anchors.size(), Jet(set));
    jets = &zero_jets;
  } else {
    target = ScalarField(grid, 0.0);
    for (std::size_t y = 0; y < grid.size(); ++y) target[y] = U0[y] - U0.min();
  }
  PointMap identity = [](const Point& p) { return p; };
  ExtensionField ext = rough_composition_extend(target, identity, pou, w.s, w.r, jets);

  emit(ctx, rec, "whitney.json", io::whitney_json(dec));
  emit_stream(ctx, rec, "whitney.csv", [&](std::ostream& os) { io::write_whitney_csv(os, dec); });
  emit_stream(ctx, rec, "extension.csv", [&](std::ostream& os) { io::write_field_csv(os, ext.F); });
  int min_order = std::numeric_limits<int>::max();
  for (int s : ext.flatness.order) min_order = std::min(min_order, s);
  json j = {{"partition",
             {{"samples", pr.samples},
              {"uncovered", pr.uncovered},
              {"max_sum_error", pr.max_sum_error},
              {"M1", pr.M1},
              {"alpha", pr.alpha},
              {"supports_ok", pr.supports_ok},
              {"max_active", pr.max_active}}},
            {"extension",
             {{"C", ext.C},
              {"K", number(ext.K)},
              {"nonnegative", ext.nonnegative},
              {"vanishes_on_anchors", ext.vanishes_on_anchors},
              {"zero_set_matches", ext.zero_set_matches},
              {"dominates", ext.dominates},
              {"min_off_anchors", number(ext.min_off_anchors)},
              {"flatness_nodes", ext.flatness.nodes.size()},
              {"flatness_min_order", ext.flatness.nodes.empty() ? json() : json(min_order)}}}};
  emit(ctx, rec, "extension.json", j.dump(2) + "\n");
  const WhitneyProperties& P = dec.properties;
  rec.values["cubes"] = static_cast<double>(dec.cubes.size());
  rec.values["pou_sum_error"] = pr.max_sum_error;
  rec.values["K"] = ext.K;
  bool ok = P.disjoint_interiors && P.covers_nodes && P.constants_finite() && ext.nonnegative &&
            ext.vanishes_on_anchors && ext.zero_set_matches && ext.dominates;
  rec.summary = std::to_string(dec.cubes.size()) + " cubes over " + std::to_string(dec.anchors.size()) +
                " anchors, overlap " + std::to_string(P.overlap) + ", K=" + fmt(ext.K) +
                (ok ? ", all checks hold" : ", CHECKS FAILED");
  if (!ok) throw std::runtime_error("Whitney postconditions failed: " + rec.summary);
}

using StageFn = std::function<void(Context&, StageRecord&)>;

const std::map<std::string, StageFn>& stage_table() {
  static const std::map<std::string, StageFn> t{
      {"alpha", stage_alpha},   {"barrier", stage_barrier}, {"aubry", stage_aubry}, {"quotient", stage_quotient},
      {"subsol", stage_subsol}, {"sard", stage_sard},       {"sweep", stage_sweep}, {"whitney", stage_whitney}};
  return t;
}

std::vector<std::string> prerequisites(const std::string& stage, const ExperimentConfig& c) {
  if (stage == "barrier") return {"alpha"};
  if (stage == "aubry") return {"barrier"};
  if (stage == "quotient") return {"aubry"};
  if (stage == "subsol") return {"quotient"};
  if (stage == "sard" || stage == "sweep") {
    if (c.sard.u == "subsolution" || c.sard.A == "aubry") return {"aubry"};
    return {};
  }
  return {};
}

}  // namespace

const char* version() { return "0.3.0"; }

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_config(config)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> resolve_stages(const ExperimentConfig& config) {
  std::set<std::string> want;
  std::function<void(const std::string&)> add = [&](const std::string& s) {
    if (!want.insert(s).second) return;
    for (const std::string& p : prerequisites(s, config)) add(p);
  };
  for (const std::string& s : config.stages) {
    if (s == "all")
      for (const std::string& k : known_stages()) add(k);
    else
      add(s);
  }
  std::vector<std::string> order;
  for (const std::string& k : known_stages())
    if (want.count(k)) order.push_back(k);
  return order;
}

int RunManifest::exit_code() const {
  for (const StageRecord& s : stages)
    if (s.status == "failed") return s.exit_code;
  return 0;
}

const StageRecord* RunManifest::find(const std::string& name) const {
  for (const StageRecord& s : stages)
    if (s.name == name) return &s;
  return nullptr;
}

std::string RunManifest::to_json() const {
  json st = json::array();
  for (const StageRecord& s : stages) {
    json values = json::object();
    for (const auto& [k, v] : s.values) values[k] = number(v);
    json e = {{"name", s.name},
              {"status", s.status},
              {"wall_seconds", s.wall_seconds},
              {"outputs", s.outputs},
              {"values", values},
              {"summary", s.summary}};
    if (!s.error.empty()) e["error"] = s.error;
    st.push_back(e);
  }
  json j = {{"config_hash", config_hash}, {"version", version}, {"seed", seed}, {"threads", threads}, {"stages", st}};
  return j.dump(2) + "\n";
}

RunManifest run(const ExperimentConfig& config, std::ostream* summary) {
  validate(config);
  RunManifest man;
  man.config_hash = config_hash(config);
  man.version = version();
  man.seed = config.seed;
  man.threads = config.threads;
  fs::path out(config.output_dir);
  fs::create_directories(out);
  io::write_text(out / "config.json", serialize_config(config));

  std::vector<std::string> order = resolve_stages(config);
  for (const std::string& s : order) {
    StageRecord rec;
    rec.name = s;
    man.stages.push_back(rec);
  }

  std::optional<Context> ctx;
  bool failed = false;
  for (StageRecord& rec : man.stages) {
    if (failed) {
      rec.status = "skipped";
      continue;
    }
    auto t0 = std::chrono::steady_clock::now();
    try {
      if (!ctx) {
        ctx.emplace(config, out, build_model(config));
        ctx->stencil = parse_stencil(config.stencil);
        if (std::find(order.begin(), order.end(), "alpha") == order.end())
          ctx->alpha = ctx->model.kind == ModelKind::linear_drift
                           ? critical_value_ratio_cycle(ctx->model, ctx->stencil, config.tolerances.critical)
                           : critical_value_closed_form(ctx->model);
      }
      stage_table().at(rec.name)(*ctx, rec);
      rec.status = "ok";
    } catch (const ConfigError& e) {
      rec.status = "failed";
      rec.error = e.what();
      rec.exit_code = 2;
    } catch (const NumericalInconsistency& e) {
      rec.status = "failed";
      rec.error = e.what();
      rec.exit_code = 3;
    } catch (const std::exception& e) {
      rec.status = "failed";
      rec.error = e.what();
      rec.exit_code = 4;
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed = rec.status == "failed";
    if (summary) {
      char t[32];
      std::snprintf(t, sizeof t, "%.3f", rec.wall_seconds);
      *summary << rec.name << ": " << rec.status << " (" << t << " s) "
               << (failed ? rec.error : rec.summary) << '\n';
    }
  }
  if (summary)
    for (const StageRecord& rec : man.stages)
      if (rec.status == "skipped") *summary << rec.name << ": skipped\n";
  io::write_text(out / "manifest.json", man.to_json());
  return man;
}

}  // namespace wkam
