#pragma once

// Run configuration for the command-line tool, read from a JSON document.
// Every object rejects keys it does not know.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "rotstar/model.hpp"
#include "rotstar/solver.hpp"

namespace rotstar::cli {

/// Invalid or malformed configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GeometryConfig {
  double b = 1.0;
  std::optional<double> xi;
  std::size_t n_b = 5;
  std::optional<double> r_max;
  std::size_t cells = 400;
  std::size_t shell_nodes = 16;
};

struct ValidateConfig {
  double tolerance_scale = 1.0;
  std::size_t samples = 1000000;
};

struct RunConfig {
  ModelSpec model;
  GeometryConfig geometry;
  SolverOptions solver;
  bool allow_failed_conditions = false;
  ValidateConfig validate;
  std::uint64_t seed = 20240611;
  std::size_t check_samples = 100;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// Outer radius from the config, or 4 times the non-rotating isentropic
/// support of the polytrope with the same K and gamma.
double resolve_outer_radius(const RunConfig& config);

}  // namespace rotstar::cli
