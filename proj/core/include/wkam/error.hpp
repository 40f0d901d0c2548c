#pragma once

#include <stdexcept>
#include <string>

namespace wkam {

// Malformed or schema-violating experiment configuration. `field` is a dotted
// path such as "grid.d" (empty for parse errors).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Raised when a computed object contradicts a structural invariant: negative
// cycles at or above the critical level, negative pseudodistances, sub-critical
// radicands, inconsistent jets.
class NumericalInconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public NumericalInconsistency {
 public:
  NonConvergence(const std::string& what, double drift)
      : NumericalInconsistency(what), drift_(drift) {}
  double drift() const { return drift_; }

 private:
  double drift_;
};

}  // namespace wkam
