#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <utility>
#include <vector>

#include "rotstar/oracles.hpp"

namespace rotstar::cli {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; });
    if (!known) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError("missing '" + std::string(key) + "' in " + where);
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError("'" + std::string(key) + "' in " + where + " must be a number");
  return v.get<double>();
}

std::optional<double> optional_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) return std::nullopt;
  return number(j, key, where);
}

std::size_t count(const json& j, const char* key, const std::string& where, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_unsigned()) throw ConfigError("'" + std::string(key) + "' in " + where + " must be a nonnegative integer");
  return v.get<std::size_t>();
}

std::string text(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw ConfigError("'" + std::string(key) + "' in " + where + " must be a string");
  }
  return j.at(key).get<std::string>();
}

std::vector<std::pair<double, double>> table(const json& j, const std::string& where) {
  if (!j.contains("table") || !j.at("table").is_array()) throw ConfigError(where + ".table must be an array");
  std::vector<std::pair<double, double>> out;
  for (const auto& row : j.at("table")) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
      throw ConfigError(where + ".table rows must be [abscissa, value] pairs");
    }
    out.emplace_back(row[0].get<double>(), row[1].get<double>());
  }
  return out;
}

EquationOfState parse_eos(const json& j) {
  const std::string where = "model.eos";
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  const auto type = text(j, "type", where);
  if (type == "polytrope") {
    require_object(j, where, {"type", "K", "gamma", "gamma_bar"});
    return EquationOfState::polytrope(number(j, "K", where), number(j, "gamma", where),
                                      optional_number(j, "gamma_bar", where));
  }
  if (type == "table") {
    require_object(j, where, {"type", "table", "gamma_bar"});
    return EquationOfState::tabulated(table(j, where), optional_number(j, "gamma_bar", where));
  }
  throw ConfigError("model.eos.type must be 'polytrope' or 'table'");
}

EntropyProfile parse_entropy(const json& j) {
  const std::string where = "model.entropy";
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  const auto type = text(j, "type", where);
  EntropyProfile profile = EntropyProfile::linear(0.0);
  if (type == "linear") {
    require_object(j, where, {"type", "slope", "delta0", "T_upper", "T_lower"});
    // The config gives dS/dn; the profile stores the decay rate.
    profile = EntropyProfile::linear(-number(j, "slope", where), optional_number(j, "delta0", where));
  } else if (type == "table") {
    require_object(j, where, {"type", "table", "delta0", "T_upper", "T_lower"});
    profile = EntropyProfile::tabulated(table(j, where), optional_number(j, "delta0", where));
  } else if (type == "isentropic") {
    require_object(j, where, {"type", "delta0", "T_upper", "T_lower"});
    profile = EntropyProfile::linear(0.0, optional_number(j, "delta0", where));
  } else {
    throw ConfigError("model.entropy.type must be 'linear', 'table' or 'isentropic'");
  }
  profile.declared_upper = optional_number(j, "T_upper", where);
  profile.declared_lower = optional_number(j, "T_lower", where);
  return profile;
}

AngularMomentumProfile parse_angmom(const json& j) {
  const std::string where = "model.angmom";
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  const auto type = text(j, "type", where);
  if (type == "power") {
    require_object(j, where, {"type", "beta", "q"});
    return AngularMomentumProfile::power(number(j, "beta", where), number(j, "q", where));
  }
  if (type == "table") {
    require_object(j, where, {"type", "table"});
    return AngularMomentumProfile::tabulated(table(j, where));
  }
  if (type == "none") {
    require_object(j, where, {"type"});
    return AngularMomentumProfile::none();
  }
  throw ConfigError("model.angmom.type must be 'power', 'table' or 'none'");
}

GravityMethod parse_method(const std::string& s) {
  if (s == "auto") return GravityMethod::automatic;
  if (s == "ring") return GravityMethod::ring;
  if (s == "spherical") return GravityMethod::spherical;
  throw ConfigError("solver.gravity must be 'auto', 'ring' or 'spherical'");
}

}  // namespace

RunConfig parse_config(const json& doc) {
  RunConfig cfg;
  try {
    require_object(doc, "config", {"model", "geometry", "solver", "validate", "seed", "check_samples"});
    if (!doc.contains("model")) throw ConfigError("missing 'model'");
    const auto& m = doc.at("model");
    require_object(m, "model", {"eos", "entropy", "angmom", "M"});
    if (!m.contains("eos")) throw ConfigError("missing 'model.eos'");
    cfg.model.eos = parse_eos(m.at("eos"));
    if (m.contains("entropy")) cfg.model.entropy = parse_entropy(m.at("entropy"));
    if (m.contains("angmom")) cfg.model.angmom = parse_angmom(m.at("angmom"));
    cfg.model.total_mass = number(m, "M", "model");
    if (!(cfg.model.total_mass >= 0.0)) throw ConfigError("model.M must be nonnegative");

    if (doc.contains("geometry")) {
      const auto& g = doc.at("geometry");
      require_object(g, "geometry", {"b", "xi", "n_b", "R_max", "N", "n_beta"});
      cfg.geometry.b = optional_number(g, "b", "geometry").value_or(1.0);
      cfg.geometry.xi = optional_number(g, "xi", "geometry");
      cfg.geometry.n_b = count(g, "n_b", "geometry", 5);
      cfg.geometry.r_max = optional_number(g, "R_max", "geometry");
      cfg.geometry.cells = count(g, "N", "geometry", 400);
      cfg.geometry.shell_nodes = count(g, "n_beta", "geometry", 16);
    }
    cfg.model.b = cfg.geometry.b;
    cfg.model.xi = cfg.geometry.xi;

    if (doc.contains("solver")) {
      const auto& s = doc.at("solver");
      require_object(s, "solver",
                     {"damping", "residual_tolerance", "mass_tolerance", "max_iterations", "density_floor", "gravity",
                      "allow_failed_conditions"});
      auto& o = cfg.solver;
      o.damping = optional_number(s, "damping", "solver").value_or(o.damping);
      o.residual_tolerance = optional_number(s, "residual_tolerance", "solver").value_or(o.residual_tolerance);
      o.mass_tolerance = optional_number(s, "mass_tolerance", "solver").value_or(o.mass_tolerance);
      o.max_iterations = count(s, "max_iterations", "solver", o.max_iterations);
      o.density_floor = optional_number(s, "density_floor", "solver").value_or(o.density_floor);
      if (s.contains("gravity")) o.gravity = parse_method(text(s, "gravity", "solver"));
      if (s.contains("allow_failed_conditions")) {
        if (!s.at("allow_failed_conditions").is_boolean()) {
          throw ConfigError("solver.allow_failed_conditions must be a boolean");
        }
        cfg.allow_failed_conditions = s.at("allow_failed_conditions").get<bool>();
      }
    }

    if (doc.contains("validate")) {
      const auto& v = doc.at("validate");
      require_object(v, "validate", {"tolerance_scale", "samples"});
      cfg.validate.tolerance_scale = optional_number(v, "tolerance_scale", "validate").value_or(1.0);
      cfg.validate.samples = count(v, "samples", "validate", cfg.validate.samples);
      if (!(cfg.validate.tolerance_scale >= 0.0)) throw ConfigError("validate.tolerance_scale must be nonnegative");
      if (cfg.validate.samples < 10000) throw ConfigError("validate.samples must be at least 10000");
    }

    if (doc.contains("seed")) {
      if (!doc.at("seed").is_number_unsigned()) throw ConfigError("seed must be a nonnegative integer");
      cfg.seed = doc.at("seed").get<std::uint64_t>();
    }
    cfg.check_samples = count(doc, "check_samples", "config", cfg.check_samples);

    cfg.solver.validate();
    if (cfg.model.total_mass > 0.0) cfg.model.validate();
    if (cfg.geometry.cells < 8) throw ConfigError("geometry.N must be at least 8");
    if (cfg.geometry.shell_nodes < 4) throw ConfigError("geometry.n_beta must be at least 4");
    if (cfg.geometry.r_max && !(*cfg.geometry.r_max > 0.0)) throw ConfigError("geometry.R_max must be positive");
    if (cfg.check_samples < 2) throw ConfigError("check_samples must be at least 2");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return parse_config(doc);
}

double resolve_outer_radius(const RunConfig& config) {
  if (config.geometry.r_max) return *config.geometry.r_max;
  const auto* poly = config.model.eos.as_polytrope();
  if (!poly) throw ConfigError("geometry.R_max is required for a tabulated equation of state");
  const double mass = config.model.total_mass > 0.0 ? config.model.total_mass : 1.0;
  try {
    return 4.0 * lane_emden(poly->K, poly->gamma, mass).surface;
  } catch (const std::invalid_argument&) {
    throw ConfigError("geometry.R_max is required when gamma lies outside (6/5, 2] or equals 4/3");
  }
}

}  // namespace rotstar::cli
