#include "rotstar/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rotstar/errors.hpp"

namespace rotstar {

namespace {

// A(s)/s = int_0^s f(t) t^-2 dt, which vanishes at 0.
double energy_per_mass(const EquationOfState& eos, double s) { return s > 0.0 ? eos.energy_density(s) / s : 0.0; }

void require_finite(const std::vector<double>& v, const char* name) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw EvaluationError(std::string("non-finite ") + name + " in cell " + std::to_string(i));
  }
}

double floor_of(const DensityProfile& profile, double relative_floor) {
  return relative_floor * profile.max_density();
}

}  // namespace

EnergyModel::EnergyModel(ModelSpec spec, const RadialGrid& grid, GravityMethod method, const RingOptions& ring)
    : spec_(std::move(spec)), op_(GravityOperator::make(grid, method, ring)) {}

void EnergyModel::check_mesh(const DensityProfile& profile) const {
  if (!profile.grid().same_mesh(grid())) throw std::invalid_argument("profile does not match the model mesh");
}

FieldSet EnergyModel::fields(const DensityProfile& profile) const {
  check_mesh(profile);
  const auto& g = grid();
  const std::size_t n = g.cells();
  const auto r = g.midpoints();
  const auto e = g.edges();
  const auto& eos = spec_.eos;
  const auto& entropy = spec_.entropy;

  FieldSet f;
  f.n_edges = ellipsoidal_mass(profile);
  f.n_mid.resize(n);
  f.m_mid.resize(n);
  f.mean_T.resize(n);
  f.entropy_tail.assign(n, 0.0);

  const CylindricalMass cyl(profile);
  for (std::size_t i = 0; i < n; ++i) {
    f.n_mid[i] = f.n_edges[i] + profile[i] * (g.enclosed_volume(r[i]) - g.enclosed_volume(e[i]));
    f.m_mid[i] = cyl(r[i]);
    f.mean_T[i] = entropy.mean_temperature(f.n_edges[i], f.n_edges[i + 1]);
  }

  if (!entropy.is_isentropic()) {
    // Q_k = (A_k/rho_k) (T(n_{k+1}) - Tbar_k) + sum_{i>k} (A_i/rho_i) (T(n_{i+1}) - T(n_i))
    double tail = 0.0;
    for (std::size_t k = n; k-- > 0;) {
      const double per_mass = energy_per_mass(eos, profile[k]);
      const double upper = entropy.temperature(f.n_edges[k + 1]);
      f.entropy_tail[k] = tail + per_mass * (upper - f.mean_T[k]);
      tail += per_mass * (upper - entropy.temperature(f.n_edges[k]));
    }
  }

  const RotationIntegrals rot(profile, spec_.angmom);
  f.rotation = rot.cell_average_potential();
  f.rotational_energy = rot.energy();
  f.gravity = op_.shell_potential(profile.values());

  require_finite(f.mean_T, "mean temperature");
  require_finite(f.entropy_tail, "entropy tail");
  require_finite(f.rotation, "rotation potential");
  require_finite(f.gravity, "gravitational potential");
  return f;
}

EnergyBreakdown EnergyModel::energy(const DensityProfile& profile, const FieldSet& fields) const {
  check_mesh(profile);
  const auto vol = grid().volumes();
  EnergyBreakdown out;
  double grav = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] == 0.0) continue;
    out.internal += spec_.eos.energy_density(profile[i]) * vol[i] * fields.mean_T[i];
    grav += profile[i] * vol[i] * fields.gravity[i];
  }
  out.rotational = fields.rotational_energy;
  out.gravitational = -0.5 * grav;
  out.total = out.internal + out.rotational + out.gravitational;
  return out;
}

EnergyBreakdown EnergyModel::energy(const DensityProfile& profile) const { return energy(profile, fields(profile)); }

PotentialFunction EnergyModel::potential(const DensityProfile& profile, const FieldSet& fields) const {
  check_mesh(profile);
  return potential_function(profile, spec_, fields);
}

FieldSet compute_fields(const DensityProfile& profile, const ModelSpec& spec) {
  return EnergyModel(spec, profile.grid()).fields(profile);
}

double internal_energy(const DensityProfile& profile, const ModelSpec& spec) {
  const auto& g = profile.grid();
  const auto vol = g.volumes();
  const auto n = ellipsoidal_mass(profile);
  double sum = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] == 0.0) continue;
    sum += spec.eos.energy_density(profile[i]) * vol[i] * spec.entropy.mean_temperature(n[i], n[i + 1]);
  }
  return sum;
}

EnergyBreakdown total_energy(const DensityProfile& profile, const ModelSpec& spec) {
  return EnergyModel(spec, profile.grid()).energy(profile);
}

PotentialFunction potential_function(const DensityProfile& profile, const ModelSpec& spec, const FieldSet& fields) {
  const std::size_t n = profile.size();
  if (fields.gravity.size() != n || fields.mean_T.size() != n) {
    throw std::invalid_argument("fields do not match the profile");
  }
  PotentialFunction g;
  g.marginal.resize(n);
  g.values.resize(n);
  g.entropy_tail = fields.entropy_tail;
  g.rotation = fields.rotation;
  g.gravity = fields.gravity;
  for (std::size_t i = 0; i < n; ++i) {
    g.marginal[i] = spec.eos.marginal_energy(profile[i]) * fields.mean_T[i];
    g.values[i] = g.marginal[i] + g.entropy_tail[i] + g.rotation[i] - g.gravity[i];
  }
  require_finite(g.values, "potential function");
  return g;
}

DerivativeReport directional_derivative_check(const EnergyModel& model, const DensityProfile& profile,
                                              std::span<const double> sigma, std::span<const double> t_list,
                                              double epsilon) {
  const auto& grid = profile.grid();
  const std::size_t n = profile.size();
  if (sigma.size() != n) throw std::invalid_argument("sigma needs one value per cell");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const double u_max = grid.nodes().back();
  const double axis_factor = std::sqrt((1.0 - u_max) * (1.0 + u_max));
  const double reach = std::max(1.0, grid.ellipticity());
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(sigma[i])) throw std::invalid_argument("sigma must be finite");
    if (sigma[i] == 0.0) continue;
    if (grid.midpoints()[i] * axis_factor < epsilon) {
      throw std::invalid_argument("sigma must vanish on shells reaching eta < epsilon (cell " + std::to_string(i) + ")");
    }
    if (grid.edges()[i + 1] * reach > 1.0 / epsilon) {
      throw std::invalid_argument("sigma must vanish beyond 1/epsilon (cell " + std::to_string(i) + ")");
    }
    if (profile[i] == 0.0 && sigma[i] < 0.0) {
      throw std::invalid_argument("sigma must be nonnegative where rho = 0 (cell " + std::to_string(i) + ")");
    }
  }

  const auto base_fields = model.fields(profile);
  const double base = model.energy(profile, base_fields).total;
  const auto g = model.potential(profile, base_fields);
  const auto vol = grid.volumes();
  double predicted = 0.0;
  for (std::size_t i = 0; i < n; ++i) predicted += g.values[i] * sigma[i] * vol[i];

  DerivativeReport report;
  for (double t : t_list) {
    if (!(t > 0.0)) throw std::invalid_argument("step sizes must be positive");
    std::vector<double> shifted(n);
    for (std::size_t i = 0; i < n; ++i) {
      shifted[i] = profile[i] + t * sigma[i];
      if (shifted[i] < 0.0) throw std::invalid_argument("step makes the density negative");
    }
    const double e = model.energy(DensityProfile(grid, std::move(shifted))).total;
    DerivativeSample s{t, (e - base) / t, predicted, 0.0};
    const double diff = std::abs(s.finite_difference - predicted);
    s.gap = predicted != 0.0 ? diff / std::abs(predicted) : diff;
    report.max_gap = std::max(report.max_gap, s.gap);
    report.samples.push_back(s);
  }
  return report;
}

DerivativeReport directional_derivative_check(const DensityProfile& profile, const ModelSpec& spec,
                                              std::span<const double> sigma, std::span<const double> t_list,
                                              double epsilon) {
  return directional_derivative_check(EnergyModel(spec, profile.grid()), profile, sigma, t_list, epsilon);
}

ElResidual el_residual(const DensityProfile& profile, const PotentialFunction& g, double lambda,
                       double relative_floor) {
  if (g.values.size() != profile.size()) throw std::invalid_argument("potential does not match the profile");
  const double floor = floor_of(profile, relative_floor);
  ElResidual res;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] > floor) {
      res.interior = std::max(res.interior, std::abs(g.values[i] - lambda));
    } else {
      res.exterior = std::max(res.exterior, lambda - g.values[i]);
    }
  }
  return res;
}

ElResidual el_residual(const DensityProfile& profile, const ModelSpec& spec, double lambda, double relative_floor) {
  const EnergyModel model(spec, profile.grid());
  return el_residual(profile, model.potential(profile, model.fields(profile)), lambda, relative_floor);
}

SteadyResidual steady_residual(const DensityProfile& profile, const ModelSpec& spec, const RingOptions& ring) {
  const auto& grid = profile.grid();
  const double b = grid.ellipticity();
  const auto r = grid.midpoints();
  const std::size_t n = profile.size();
  const double floor = floor_of(profile, 1e-12);
  std::size_t band = 0;
  for (std::size_t i = 0; i < n; ++i) band += profile[i] > floor ? 1 : 0;
  if (band < 4) throw std::invalid_argument("density band too thin for the steady residual (fewer than 4 shells)");

  const double support = profile.support_extent();
  const double h = 0.5 * grid.spacing();
  const CylindricalMass cyl(profile);

  const auto density = [&](double rb) {
    if (rb <= r[0]) return profile[0];
    if (rb >= r[n - 1]) return profile[n - 1];
    const std::size_t i = std::min(static_cast<std::size_t>((rb - r[0]) / grid.spacing()), n - 2);
    const double w = (rb - r[i]) / grid.spacing();
    return (1.0 - w) * profile[i] + w * profile[i + 1];
  };
  const auto pressure = [&](double eta, double z) {
    const double rb = ellipsoidal_radius(eta, z, b);
    return spec.eos.pressure(density(rb)) * spec.entropy.temperature(ellipsoidal_mass_at(profile, rb));
  };
  const auto potential = [&](double eta, double z) {
    return b == 1.0 ? spherical_potential_at(profile, ellipsoidal_radius(eta, z, b))
                    : potential_at(profile, eta, z, ring);
  };

  const auto u = grid.nodes();
  const auto w = grid.weights();
  SteadyResidual out;
  double scale = 0.0;
  double worst_shell = 0.0;
  for (int k = 0; k < 7; ++k) {
    const double rb = support * (0.2 + 0.1 * k);
    const double rho = density(rb);
    double shell = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
      const auto p = shell_point(rb, u[j], b);
      const double dp_eta = (pressure(p.eta + h, p.z) - pressure(p.eta - h, p.z)) / (2.0 * h);
      const double dp_z = (pressure(p.eta, p.z + h) - pressure(p.eta, p.z - h)) / (2.0 * h);
      const double dB_eta = (potential(p.eta + h, p.z) - potential(p.eta - h, p.z)) / (2.0 * h);
      const double dB_z = (potential(p.eta, p.z + h) - potential(p.eta, p.z - h)) / (2.0 * h);
      const double centrifugal = spec.angmom(cyl(p.eta)) / (p.eta * p.eta * p.eta);
      const double d_eta = dp_eta - rho * (dB_eta + centrifugal);
      const double d_z = dp_z - rho * dB_z;
      out.pointwise = std::max(out.pointwise, std::hypot(d_eta, d_z));
      scale = std::max(scale, rho * std::hypot(dB_eta, dB_z));
      // Radial direction at fixed u: dx/dr = (sqrt(1 - u^2), b u).
      const double c = std::sqrt((1.0 - u[j]) * (1.0 + u[j]));
      shell += 0.5 * w[j] * (d_eta * c + d_z * b * u[j]);
      ++out.points;
    }
    worst_shell = std::max(worst_shell, std::abs(shell));
  }
  if (scale > 0.0) {
    out.pointwise /= scale;
    out.shell_averaged = worst_shell / scale;
  }
  return out;
}

}  // namespace rotstar
