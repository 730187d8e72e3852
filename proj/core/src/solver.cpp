#include "rotstar/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rotstar/errors.hpp"

namespace rotstar {

namespace {

double candidate_mass(const FieldSet& fields, const ModelSpec& spec, const RadialGrid& grid, double lambda) {
  const auto vol = grid.volumes();
  double mass = 0.0;
  for (std::size_t i = 0; i < vol.size(); ++i) {
    const double y = lambda - fields.entropy_tail[i] - fields.rotation[i] + fields.gravity[i];
    if (y <= 0.0) continue;
    try {
      mass += spec.eos.density_from_marginal(y / fields.mean_T[i]) * vol[i];
    } catch (const std::range_error&) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return mass;
}

std::vector<double> initial_density(const EnergyModel& model, const SolverOptions& options) {
  const auto& grid = model.grid();
  std::vector<double> rho;
  if (options.initial) {
    rho = *options.initial;
    if (rho.size() != grid.cells()) throw std::invalid_argument("initial profile does not match the mesh");
  } else {
    const auto ball = DensityProfile::uniform_ball(grid, 0.5 * grid.outer_radius(), 1.0);
    rho.assign(ball.values().begin(), ball.values().end());
  }
  const double mass = DensityProfile(grid, rho).total_mass();
  if (!(mass > 0.0)) throw std::invalid_argument("initial profile has no mass");
  const double scale = model.spec().total_mass / mass;
  for (auto& v : rho) v *= scale;
  return rho;
}

}  // namespace

void SolverOptions::validate() const {
  if (!(damping >= 0.0 && damping <= 1.0)) throw std::invalid_argument("damping must lie in [0, 1]");
  if (!(residual_tolerance > 0.0)) throw std::invalid_argument("residual tolerance must be positive");
  if (!(mass_tolerance > 0.0)) throw std::invalid_argument("mass tolerance must be positive");
  if (!(density_floor >= 0.0)) throw std::invalid_argument("density floor must be nonnegative");
  if (max_iterations == 0) throw std::invalid_argument("at least one iteration is required");
}

std::vector<double> candidate_density(const FieldSet& fields, const ModelSpec& spec, double lambda) {
  const std::size_t n = fields.gravity.size();
  std::vector<double> rho(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = lambda - fields.entropy_tail[i] - fields.rotation[i] + fields.gravity[i];
    if (y > 0.0) rho[i] = spec.eos.density_from_marginal(y / fields.mean_T[i]);
  }
  return rho;
}

double solve_lambda(const FieldSet& fields, const ModelSpec& spec, const RadialGrid& grid, double target,
                    double mass_tolerance) {
  if (!(target >= 0.0)) throw std::invalid_argument("target mass must be nonnegative");
  const std::size_t n = grid.cells();
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double base = fields.entropy_tail[i] + fields.rotation[i] - fields.gravity[i];
    if (!std::isfinite(base)) throw EvaluationError("non-finite potential in cell " + std::to_string(i));
    lo = std::min(lo, base);
  }
  if (target == 0.0) return lo;

  double width = std::max(1.0, std::abs(lo));
  double hi = lo + width;
  int doublings = 0;
  while (candidate_mass(fields, spec, grid, hi) < target) {
    if (++doublings > 60) throw UnsolvableConstraint("mass constraint could not be bracketed");
    width *= 2.0;
    hi = lo + width;
  }
  // mass(lo) = 0 < target <= mass(hi)
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double m = candidate_mass(fields, spec, grid, mid);
    if (std::abs(m - target) <= 1e-3 * mass_tolerance * target) return mid;
    (m < target ? lo : hi) = mid;
  }
  const double m_hi = candidate_mass(fields, spec, grid, hi);
  const double m_lo = candidate_mass(fields, spec, grid, lo);
  return std::abs(m_hi - target) <= std::abs(target - m_lo) ? hi : lo;
}

ScfState scf_step(const EnergyModel& model, const ScfState& state, const SolverOptions& options) {
  const auto fields = model.fields(state.profile);
  const double lambda =
      solve_lambda(fields, model.spec(), model.grid(), model.spec().total_mass, options.mass_tolerance);
  const auto candidate = candidate_density(fields, model.spec(), lambda);
  const double w = options.damping;
  std::vector<double> next(candidate.size());
  for (std::size_t i = 0; i < next.size(); ++i) next[i] = (1.0 - w) * state.profile[i] + w * candidate[i];
  ScfState out{DensityProfile(model.grid(), std::move(next)), lambda, {}, 0.0};
  const auto next_fields = model.fields(out.profile);
  out.energy = model.energy(out.profile, next_fields).total;
  const double next_lambda =
      solve_lambda(next_fields, model.spec(), model.grid(), model.spec().total_mass, options.mass_tolerance);
  out.lambda = next_lambda;
  out.residual = el_residual(out.profile, model.potential(out.profile, next_fields), next_lambda, options.density_floor);
  return out;
}

SolveReport solve(const EnergyModel& model, const SolverOptions& options) {
  options.validate();
  const auto& spec = model.spec();
  const auto& grid = model.grid();
  SolveReport report{.profile = DensityProfile::zero(grid)};

  if (spec.total_mass == 0.0) {
    report.converged = true;
    report.fields = model.fields(report.profile);
    report.potential = model.potential(report.profile, report.fields);
    report.lambda = solve_lambda(report.fields, spec, grid, 0.0);
    report.residual = el_residual(report.profile, report.potential, report.lambda, options.density_floor);
    return report;
  }
  spec.validate();

  DensityProfile profile(grid, initial_density(model, options));
  FieldSet fields;
  PotentialFunction potential;
  EnergyBreakdown energy;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    fields = model.fields(profile);
    potential = model.potential(profile, fields);
    energy = model.energy(profile, fields);
    report.energy_trace.push_back(energy.total);
    const double lambda = solve_lambda(fields, spec, grid, spec.total_mass, options.mass_tolerance);
    const auto residual = el_residual(profile, potential, lambda, options.density_floor);
    report.lambda = lambda;
    report.residual = residual;
    report.iterations = it;
    const double tol = options.residual_tolerance * std::max(1.0, std::abs(lambda));
    if (residual.interior <= tol && residual.exterior <= tol) {
      report.converged = true;
      break;
    }
    if (it + 1 == options.max_iterations) break;
    const auto candidate = candidate_density(fields, spec, lambda);
    std::vector<double> next(candidate.size());
    const double w = options.damping;
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = (1.0 - w) * profile[i] + w * candidate[i];
    profile = DensityProfile(grid, std::move(next));
  }

  report.profile = profile;
  report.fields = std::move(fields);
  report.potential = std::move(potential);
  report.energy = energy;
  report.mass_error = std::abs(profile.total_mass() - spec.total_mass) / spec.total_mass;
  if (report.converged && report.mass_error > options.mass_tolerance) {
    report.converged = false;
    report.warnings.push_back("mass error above tolerance");
  }
  report.support_radius = support_radius(profile, options.density_floor * profile.max_density());
  if (report.support_radius > 0.9 * grid.outer_radius()) {
    report.truncation_warning = true;
    report.warnings.push_back("support exceeds 0.9 R_max; the state solves the truncated problem");
  }
  return report;
}

SolveReport solve(const ModelSpec& spec, const RadialGrid& grid, const SolverOptions& options) {
  return solve(EnergyModel(spec, grid, options.gravity, options.ring), options);
}

double support_radius(const DensityProfile& profile, double floor) {
  if (!(floor >= 0.0)) throw std::invalid_argument("floor must be nonnegative");
  const auto r = profile.grid().midpoints();
  for (std::size_t i = profile.size(); i-- > 0;) {
    if (profile[i] > floor) return r[i];
  }
  return 0.0;
}

std::vector<double> scan_points(double xi, std::size_t n_points) {
  if (!(xi > 1.0)) throw std::invalid_argument("xi must exceed 1");
  if (n_points < 3) throw std::invalid_argument("scan needs at least 3 points");
  std::vector<double> b(n_points);
  const double t = std::log(xi);
  for (std::size_t k = 0; k < n_points; ++k) {
    const double s = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(n_points - 1);
    b[k] = std::exp(s * t);
  }
  return b;
}

ScanResult scan_b(const ModelSpec& spec, double xi, std::size_t n_points, const RadialGrid& grid,
                  const SolverOptions& options) {
  const auto bs = scan_points(xi, n_points);
  const GravityMethod method =
      options.gravity == GravityMethod::automatic ? GravityMethod::ring : options.gravity;
  ScanResult result;
  std::optional<std::vector<double>> previous;
  double previous_b = 0.0;
  for (double b : bs) {
    ModelSpec s = spec;
    s.b = b;
    s.xi = xi;
    SolverOptions opts = options;
    opts.gravity = method;
    if (previous) {
      const double a = previous_b / b;
      std::vector<double> warm(*previous);
      for (auto& v : warm) v *= a;
      opts.initial = std::move(warm);
    }
    const auto g = grid.with_ellipticity(b);
    ScanEntry entry{b, 0.0, false, 0};
    try {
      const auto report = solve(EnergyModel(s, g, method, options.ring), opts);
      entry.energy = report.energy.total;
      entry.converged = report.converged;
      entry.iterations = report.iterations;
      previous.emplace(report.profile.values().begin(), report.profile.values().end());
      previous_b = b;
    } catch (const UnsolvableConstraint&) {
      entry.converged = false;
    }
    result.entries.push_back(entry);
  }
  for (std::size_t k = 0; k < result.entries.size(); ++k) {
    const auto& e = result.entries[k];
    if (!e.converged) continue;
    if (!result.argmin || e.energy < result.entries[*result.argmin].energy) result.argmin = k;
  }
  return result;
}

}  // namespace rotstar
