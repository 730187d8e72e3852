#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "rotstar/energy.hpp"
#include "rotstar/gravity.hpp"
#include "rotstar/oracles.hpp"

namespace rotstar::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double pi = std::numbers::pi;

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

RadialGrid make_grid(const RunConfig& config, double b) {
  try {
    return build_grid(b, resolve_outer_radius(config), config.geometry.cells, config.geometry.shell_nodes);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

struct Check {
  std::string name;
  double value;
  double reference;
  double error;
  double tolerance;
  bool pass;
};

json check_json(const Check& c) {
  return {{"name", c.name},           {"value", c.value}, {"reference", c.reference},
          {"error", c.error},         {"tolerance", c.tolerance}, {"pass", c.pass}};
}

Check relative_check(std::string name, double value, double reference, double tolerance) {
  const double err = std::abs(value - reference) / std::abs(reference);
  return {std::move(name), value, reference, err, tolerance, err <= tolerance};
}

Check absolute_check(std::string name, double value, double reference, double tolerance) {
  const double err = std::abs(value - reference);
  return {std::move(name), value, reference, err, tolerance, err <= tolerance};
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json conditions_json(const ConditionReport& report) {
  const auto one = [](const ConditionResult& c) {
    json j{{"name", c.name}, {"pass", c.pass}, {"samples", c.samples}, {"note", c.note}};
    if (c.counterexample) {
      const auto& x = *c.counterexample;
      j["counterexample"] = {{"a", x.a}, {"x", x.x}, {"lhs", x.lhs}, {"rhs", x.rhs}};
    }
    return j;
  };
  json list = json::array();
  for (const auto& c : report.conditions) list.push_back(one(c));
  return {{"conditions", list},
          {"remark_sufficiency", one(report.remark_sufficiency)},
          {"T0", report.T0},
          {"T1", report.T1},
          {"all_pass", report.all_pass()}};
}

std::string profile_csv(const SolveReport& report) {
  std::string out = "r,rho,n,m_eta,Kgrav,Krot,Q,Eprime\n";
  const auto r = report.profile.grid().midpoints();
  const auto& f = report.fields;
  const auto& g = report.potential;
  for (std::size_t i = 0; i < report.profile.size(); ++i) {
    const double cols[] = {r[i], report.profile[i], f.n_mid[i], f.m_mid[i], g.gravity[i], g.rotation[i],
                           g.entropy_tail[i], g.values[i]};
    for (std::size_t c = 0; c < 8; ++c) {
      if (c) out += ',';
      out += format_double(cols[c]);
    }
    out += '\n';
  }
  return out;
}

json report_json(const SolveReport& report) {
  return {{"lambda", report.lambda},
          {"energy",
           {{"internal", report.energy.internal},
            {"rotational", report.energy.rotational},
            {"gravitational", report.energy.gravitational},
            {"total", report.energy.total}}},
          {"residual", {{"interior", report.residual.interior}, {"exterior", report.residual.exterior}}},
          {"support_radius", report.support_radius},
          {"iterations", report.iterations},
          {"converged", report.converged},
          {"mass_error", report.mass_error},
          {"truncation_warning", report.truncation_warning},
          {"warnings", report.warnings},
          {"energy_trace", report.energy_trace}};
}

int cmd_check(const RunConfig& config, const fs::path& out, std::ostream& os) {
  if (!(config.model.total_mass > 0.0)) throw ConfigError("check needs a positive mass");
  const auto report = check_conditions(config.model, config.check_samples);
  const auto text = dump(conditions_json(report));
  write_file(out / "conditions.json", text);
  os << text;
  return report.all_pass() ? 0 : 1;
}

int cmd_solve(const RunConfig& config, const fs::path& out, std::ostream& os) {
  const auto grid = make_grid(config, config.model.b);
  std::vector<std::string> warnings;
  if (config.model.total_mass > 0.0) {
    const auto conditions = check_conditions(config.model, config.check_samples);
    if (!conditions.all_pass()) {
      std::string failed;
      for (const auto& c : conditions.conditions) {
        if (!c.pass) failed += (failed.empty() ? "" : ", ") + c.name;
      }
      if (!config.allow_failed_conditions) {
        os << "structural conditions failed: " << failed << "\n";
        write_file(out / "conditions.json", dump(conditions_json(conditions)));
        return 1;
      }
      warnings.push_back("structural conditions failed: " + failed);
    }
  }
  auto report = solve(config.model, grid, config.solver);
  report.warnings.insert(report.warnings.begin(), warnings.begin(), warnings.end());
  write_file(out / "profile.csv", profile_csv(report));
  const auto text = dump(report_json(report));
  write_file(out / "report.json", text);
  os << text;
  return report.converged ? 0 : 1;
}

int cmd_scan_b(const RunConfig& config, const fs::path& out, std::ostream& os) {
  if (!config.geometry.xi) throw ConfigError("scan-b needs geometry.xi");
  if (config.geometry.n_b < 3) throw ConfigError("geometry.n_b must be at least 3");
  const auto conditions = check_conditions(config.model, config.check_samples);
  if (!conditions.all_pass() && !config.allow_failed_conditions) {
    os << "structural conditions failed\n";
    return 1;
  }
  const auto grid = make_grid(config, 1.0);
  const auto result = scan_b(config.model, *config.geometry.xi, config.geometry.n_b, grid, config.solver);
  std::string csv = "b,F_b,converged\n";
  json entries = json::array();
  double max_gap = 0.0;
  bool all_converged = true;
  for (std::size_t k = 0; k < result.entries.size(); ++k) {
    const auto& e = result.entries[k];
    csv += format_double(e.b) + "," + format_double(e.energy) + "," + (e.converged ? "1" : "0") + "\n";
    entries.push_back({{"b", e.b}, {"F_b", e.energy}, {"converged", e.converged}, {"iterations", e.iterations}});
    all_converged = all_converged && e.converged;
    if (k > 0) max_gap = std::max(max_gap, std::abs(e.energy - result.entries[k - 1].energy));
  }
  json j{{"xi", *config.geometry.xi}, {"n_points", config.geometry.n_b}, {"entries", entries}, {"max_gap", max_gap}};
  if (result.argmin) {
    const auto& e = result.entries[*result.argmin];
    j["argmin"] = {{"index", *result.argmin}, {"b", e.b}, {"F_b", e.energy}};
  } else {
    j["argmin"] = nullptr;
  }
  write_file(out / "scan.csv", csv);
  const auto text = dump(j);
  write_file(out / "scan.json", text);
  os << text;
  return all_converged && result.argmin ? 0 : 1;
}

int cmd_validate(const RunConfig& config, const fs::path& out, std::ostream& os) {
  const double scale = config.validate.tolerance_scale;
  const std::size_t samples = config.validate.samples;
  std::vector<Check> checks;

  // Ring superposition against the shell theorem on a uniform ball.
  {
    const auto grid = build_grid(1.0, 2.0, 64, 8);
    const auto ball = DensityProfile::uniform_ball(grid, 1.0, 1.0);
    const auto ring = GravityOperator::ring(grid).node_potential(ball.values());
    const auto sph = spherical_potential(ball);
    const auto r = grid.midpoints();
    double worst_sph = 0.0, worst_exact = 0.0;
    for (std::size_t i = 0; i < grid.cells(); ++i) {
      const double exact = r[i] < 1.0 ? 2.0 * pi * (1.0 - r[i] * r[i] / 3.0) : 4.0 * pi / (3.0 * r[i]);
      for (std::size_t j = 0; j < grid.shell_nodes(); ++j) {
        const double v = ring[i * grid.shell_nodes() + j];
        worst_sph = std::max(worst_sph, std::abs(v - sph[i]) / sph[i]);
        worst_exact = std::max(worst_exact, std::abs(v - exact) / exact);
      }
    }
    checks.push_back({"gravity.ring_vs_spherical", worst_sph, 0.0, worst_sph, 1e-3 * scale, worst_sph <= 1e-3 * scale});
    checks.push_back(
        {"gravity.ring_vs_closed_form", worst_exact, 0.0, worst_exact, 1e-3 * scale, worst_exact <= 1e-3 * scale});
  }

  // Central potential of uniform ellipsoids against the closed form.
  for (double b : {0.5, 2.0}) {
    const auto grid = build_grid(b, 2.0, 64, 8);
    const auto body = DensityProfile::uniform_ball(grid, 1.0, 1.0);
    const double center = potential_at(body, 0.0, 0.0);
    checks.push_back(relative_check("gravity.center_b" + format_double(b), center,
                                    uniform_ellipsoid_center(b, body.total_mass(), 1.0), 1e-3 * scale));
  }

  // Ring potential against Monte Carlo at an off-axis point of a b = 2 body.
  {
    const auto grid = build_grid(2.0, 2.0, 64, 8);
    const auto body = DensityProfile::uniform_ball(grid, 1.0, 1.0);
    const double v = potential_at(body, 0.3, 0.4);
    const auto mc = monte_carlo_potential(body, 0.3, 0.4, samples, config.seed);
    checks.push_back(absolute_check("gravity.monte_carlo", v, mc.value, 3.0 * mc.std_error * scale));
  }

  // Homoeoid shell averages of an oblate body.
  {
    const auto grid = build_grid(0.5, 2.0, 32, 8);
    const auto body = DensityProfile::uniform_ball(grid, 1.0, 1.0);
    const auto op = GravityOperator::ring(grid);
    const auto nodes = op.node_potential(body.values());
    const auto ref = homoeoid_shell_potential(body);
    const auto w = grid.weights();
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.cells(); ++i) {
      double avg = 0.0;
      for (std::size_t j = 0; j < grid.shell_nodes(); ++j) avg += 0.5 * w[j] * nodes[i * grid.shell_nodes() + j];
      worst = std::max(worst, std::abs(avg - ref[i]) / ref[i]);
    }
    checks.push_back({"gravity.homoeoid_shells", worst, 0.0, worst, 1e-5 * scale, worst <= 1e-5 * scale});
  }

  // Cylindrical mass against the closed form and Monte Carlo.
  {
    const auto grid = build_grid(1.0, 2.0, 64, 8);
    const auto ball = DensityProfile::uniform_ball(grid, 1.0, 1.0);
    const double exact = uniform_ellipsoid_cyl_mass(1.0, 1.0, 1.0, 0.6);
    checks.push_back(relative_check("fields.cyl_mass_closed_form", cylindrical_mass(ball, 0.6), exact, 1e-12 * scale));
    const auto mc = monte_carlo_cyl_mass(ball, 0.6, samples, config.seed + 1);
    checks.push_back(absolute_check("fields.cyl_mass_monte_carlo", mc.value, exact, 3.0 * mc.std_error * scale));
  }

  // Lane-Emden end to end.
  {
    ModelSpec spec;
    const auto grid = build_grid(1.0, 3.0, 200, 8);
    const auto report = solve(spec, grid, SolverOptions{});
    const auto le = lane_emden(1.0, 2.0, 1.0);
    double worst = 0.0;
    const auto r = grid.midpoints();
    for (std::size_t i = 0; i < grid.cells(); ++i) {
      worst = std::max(worst, std::abs(report.profile[i] - le.density(r[i])) / le.central_density);
    }
    checks.push_back({"lane_emden.converged", report.converged ? 1.0 : 0.0, 1.0, report.converged ? 0.0 : 1.0, 0.0,
                      report.converged});
    checks.push_back(relative_check("lane_emden.lambda", report.lambda, le.multiplier(), 1e-3 * scale));
    checks.push_back(
        absolute_check("lane_emden.support", report.support_radius, le.surface, 2.0 * grid.spacing() * scale));
    checks.push_back({"lane_emden.density", worst, 0.0, worst, 1e-3 * scale, worst <= 1e-3 * scale});
  }

  bool all = true;
  json list = json::array();
  for (const auto& c : checks) {
    all = all && c.pass;
    list.push_back(check_json(c));
  }
  json failures = json::array();
  for (const auto& c : checks) {
    if (!c.pass) failures.push_back(c.name);
  }
  const auto text = dump({{"seed", config.seed}, {"checks", list}, {"failures", failures}, {"all_pass", all}});
  write_file(out / "validate.json", text);
  os << text;
  return all ? 0 : 1;
}

int cmd_energy(const RunConfig& config, const fs::path& profile_path, const fs::path& out, std::ostream& os) {
  std::ifstream in(profile_path);
  if (!in) throw ConfigError("cannot open profile " + profile_path.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty profile file");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  const auto column = [&](const std::string& name) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == name) return c;
    }
    throw ConfigError("profile lacks column '" + name + "'");
  };
  const std::size_t cr = column("r"), crho = column("rho");
  std::vector<double> r, rho;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size()) throw ConfigError("ragged profile row");
    try {
      r.push_back(std::stod(cells[cr]));
      rho.push_back(std::stod(cells[crho]));
    } catch (const std::exception&) {
      throw ConfigError("non-numeric profile entry");
    }
  }
  if (r.size() < 8) throw ConfigError("profile needs at least 8 rows");
  const double dr = 2.0 * r[0];
  const double r_max = dr * static_cast<double>(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (std::abs(r[i] - dr * (static_cast<double>(i) + 0.5)) > 1e-9 * r_max) {
      throw ConfigError("profile radii are not uniform cell midpoints");
    }
  }
  RadialGrid grid = [&] {
    try {
      return build_grid(config.model.b, r_max, r.size(), config.geometry.shell_nodes);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  DensityProfile profile = [&] {
    try {
      return DensityProfile(grid, rho);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  const EnergyModel model(config.model, grid, config.solver.gravity, config.solver.ring);
  const auto e = model.energy(profile);
  const auto text = dump({{"internal", e.internal},
                          {"rotational", e.rotational},
                          {"gravitational", e.gravitational},
                          {"total", e.total},
                          {"mass", profile.total_mass()}});
  write_file(out / "energy.json", text);
  os << text;
  return 0;
}

}  // namespace rotstar::cli
