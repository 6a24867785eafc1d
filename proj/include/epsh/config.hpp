#ifndef EPSH_CONFIG_HPP
#define EPSH_CONFIG_HPP

#include <map>
#include <optional>
#include <string>

#include "epsh/evolve.hpp"

namespace epsh {

// Plain-text "key = value" configuration. '#' starts a comment; keys are
// validated against the known set so typos fail loudly.
class Config {
public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  double num(const std::string& key) const;
  double num_or(const std::string& key, double fallback) const;
  int integer(const std::string& key) const;
  std::string str(const std::string& key) const;
  bool flag_or(const std::string& key, bool fallback) const;

  // canonical text (sorted key = value lines) for provenance hashing
  std::string canonical() const;

private:
  std::map<std::string, std::string> kv_;
};

// Fully assembled run inputs.
struct RunSetup {
  PlasmaParams params;
  Grid grid;
  BoundaryProfile boundary;
  EvolveConfig evolve;
  double beta = 0.0;  // 0 = derive from the fitted decay exponent

  static RunSetup from_config(const Config& c);
  SystemContext context() const {
    return SystemContext::make(params, grid, boundary, evolve, beta);
  }
};

// Optional initial perturbation described in the configuration
// (init.kind = zero | bump).
FieldState initial_state(const Config& c, const SystemContext& ctx);

}  // namespace epsh

#endif
