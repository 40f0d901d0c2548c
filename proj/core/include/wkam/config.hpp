#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wkam/model.hpp"
#include "wkam/potential.hpp"

namespace wkam {

struct GridSpec {
  int d = 1;
  int n = 64;
  bool operator==(const GridSpec&) const = default;
};

struct ModelSpec {
  ModelKind kind = ModelKind::mechanical;
  PotentialSpec potential = ZeroPotential{};
  std::vector<double> eta_c;           // empty means zero
  std::vector<TrigTerm> eta_f_modes;   // exact part df as a trigonometric sum
  double gamma = 1.0;
  bool operator==(const ModelSpec&) const = default;
};

struct ToleranceSpec {
  std::optional<double> tol_aubry;  // defaults computed from the model
  std::optional<double> tol_class;  // defaults to tol_aubry
  double kappa = 4.0;
  double critical = 1e-9;           // ratio-cycle tolerance
  bool operator==(const ToleranceSpec&) const = default;
};

// u: "subsolution" (h(z,·) from the first Aubry node), "potential", "constant".
// A: "aubry", "min_set" (U = min U), "all".
struct SardSpec {
  std::string u = "subsolution";
  std::string A = "aubry";
  int N = 8;
  std::vector<int> ladder{4, 8, 16, 32, 64};
  int s_max = 4;
  bool operator==(const SardSpec&) const = default;
};

// mask: "random" (Bernoulli(density) on W₁ nodes; extends the distance-power
// function with zero jets) or "zero_set" (nodes of W₁ where U = min U;
// extends U itself).
struct WhitneySpec {
  Coord lo{0, 0, 0};
  int side = 16;
  std::string mask = "random";
  double density = 0.05;
  int r = 4;
  int s = 3;
  int refine = 4;
  int samples = 2000;
  bool operator==(const WhitneySpec&) const = default;
};

struct ExperimentConfig {
  GridSpec grid;
  ModelSpec model;
  std::vector<std::string> stages{"alpha", "barrier", "aubry", "quotient", "subsol"};
  std::string stencil = "default";
  ToleranceSpec tolerances;
  SardSpec sard;
  WhitneySpec whitney;
  std::string output_dir = "wkam_out";
  std::uint64_t seed = 1;
  int threads = 1;
  bool operator==(const ExperimentConfig&) const = default;
};

const std::vector<std::string>& known_stages();

// Throws ConfigError; parse errors carry line and column in the message.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
// Canonical JSON (sorted keys, every field present).
std::string serialize_config(const ExperimentConfig& config);
void validate(const ExperimentConfig& config);

LagrangianModel build_model(const ExperimentConfig& config);

}  // namespace wkam
