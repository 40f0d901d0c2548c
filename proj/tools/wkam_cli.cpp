#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wkam/config.hpp"
#include "wkam/error.hpp"
#include "wkam/pipeline.hpp"

namespace {

struct Options {
  std::string config;
  std::optional<std::string> out;
  std::optional<int> threads;
  std::optional<std::string> stencil;
  std::optional<double> tol_aubry;
  std::optional<double> tol_class;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete weak KAM toolkit on the flat torus"};
  app.set_version_flag("--version", wkam::version());
  app.require_subcommand(1);
  Options opt;
  const std::pair<const char*, const char*> commands[] = {
      {"alpha", "critical value"},
      {"barrier", "Mañé potential and Peierls barrier"},
      {"aubry", "Aubry set"},
      {"quotient", "static classes, quotient metric and ε-component scan"},
      {"subsol", "barrier subsolutions, representation and evaluation maps"},
      {"sard", "image measure bound of u on A"},
      {"whitney", "Whitney decomposition, partition of unity and extension"},
      {"sweep", "scaling sweep of the image measure bound"},
      {"all", "every stage"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--stencil", opt.stencil, "nearest, standard, extended or default");
    sub->add_option("--tol-aubry", opt.tol_aubry, "Aubry membership tolerance");
    sub->add_option("--tol-class", opt.tol_class, "static class tolerance");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    wkam::ExperimentConfig cfg = wkam::load_config(opt.config);
    cfg.stages = {app.get_subcommands().front()->get_name()};
    if (opt.out) cfg.output_dir = *opt.out;
    if (opt.threads) cfg.threads = *opt.threads;
    if (opt.stencil) cfg.stencil = *opt.stencil;
    if (opt.tol_aubry) cfg.tolerances.tol_aubry = *opt.tol_aubry;
    if (opt.tol_class) cfg.tolerances.tol_class = *opt.tol_class;
    wkam::validate(cfg);
    wkam::RunManifest man = wkam::run(cfg, &std::cout);
    return man.exit_code();
  } catch (const wkam::ConfigError& e) {
    std::cerr << "config error";
    if (!e.field().empty()) std::cerr << " [" << e.field() << "]";
    std::cerr << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}
