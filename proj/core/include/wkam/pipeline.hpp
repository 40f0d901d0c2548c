#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wkam/config.hpp"

namespace wkam {

const char* version();

struct StageRecord {
  std::string name;
  std::string status = "pending";  // ok, failed, skipped
  double wall_seconds = 0;
  std::vector<std::string> outputs;  // paths relative to output_dir
  std::map<std::string, double> values;
  std::string summary;
  std::string error;
  int exit_code = 0;  // 2 config, 3 numerical inconsistency, 4 other failure
};

struct RunManifest {
  std::string config_hash;  // FNV-1a 64 of the canonical config, hex
  std::string version;
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<StageRecord> stages;

  int exit_code() const;
  const StageRecord* find(const std::string& name) const;
  std::string to_json() const;
};

std::string config_hash(const ExperimentConfig& config);

// Requested stages plus their prerequisites, in execution order.
std::vector<std::string> resolve_stages(const ExperimentConfig& config);

// Runs the stages, writes artifacts and manifest.json under output_dir and a
// summary line per stage to `summary` (when non-null).
RunManifest run(const ExperimentConfig& config, std::ostream* summary);

}  // namespace wkam
