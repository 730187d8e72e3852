#pragma once

// Self-consistent-field iteration for mass-constrained minimizers of E_b.
//
// Each step freezes the fields of the current density, finds the multiplier
// lambda for which
//   rho_i(lambda) = (A')^{-1}( max(0, lambda - Q_i - K_rot,i + K_grav,i) / Tbar_i )
// carries the prescribed mass, and relaxes towards that candidate. Fixed
// points satisfy G = lambda on the support and G >= lambda off it.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rotstar/energy.hpp"
#include "rotstar/fields.hpp"
#include "rotstar/gravity.hpp"
#include "rotstar/model.hpp"

namespace rotstar {

struct SolverOptions {
  double damping = 0.5;               // omega in (0, 1]; 0 freezes the state
  double residual_tolerance = 1e-8;   // times max(1, |lambda|)
  double mass_tolerance = 1e-10;      // relative
  std::size_t max_iterations = 500;
  double density_floor = 1e-12;       // relative to max rho
  std::optional<std::vector<double>> initial;  // default: uniform ball of radius R_max / 2
  GravityMethod gravity = GravityMethod::automatic;
  RingOptions ring;

  /// Throws std::invalid_argument for out-of-range values.
  void validate() const;
};

struct ScfState {
  DensityProfile profile;
  double lambda = 0.0;
  ElResidual residual;  // of `profile` against `lambda`
  double energy = 0.0;  // total energy of `profile`
};

struct SolveReport {
  bool converged = false;
  double lambda = 0.0;
  EnergyBreakdown energy;
  ElResidual residual;
  double support_radius = 0.0;
  std::size_t iterations = 0;
  std::vector<double> energy_trace;
  double mass_error = 0.0;  // relative
  bool truncation_warning = false;
  std::vector<std::string> warnings;
  DensityProfile profile;
  FieldSet fields;
  PotentialFunction potential;
};

/// Candidate density rho_i(lambda) from frozen fields.
std::vector<double> candidate_density(const FieldSet& fields, const ModelSpec& spec, double lambda);

/// Multiplier giving the candidate density total mass `target`. Bisection
/// after doubling the bracket; throws UnsolvableConstraint after 60
/// doublings.
double solve_lambda(const FieldSet& fields, const ModelSpec& spec, const RadialGrid& grid, double target,
                    double mass_tolerance = 1e-10);

/// One damped step from `state`.
ScfState scf_step(const EnergyModel& model, const ScfState& state, const SolverOptions& options);

/// Iterates to the residual tolerance or the iteration limit.
SolveReport solve(const EnergyModel& model, const SolverOptions& options);
SolveReport solve(const ModelSpec& spec, const RadialGrid& grid, const SolverOptions& options);

/// Largest cell midpoint with rho > floor (absolute), 0 for the zero profile.
double support_radius(const DensityProfile& profile, double floor);

struct ScanEntry {
  double b = 0.0;
  double energy = 0.0;  // F_b
  bool converged = false;
  std::size_t iterations = 0;
};

struct ScanResult {
  std::vector<ScanEntry> entries;
  std::optional<std::size_t> argmin;  // over converged entries
};

/// log-uniform points over [1/xi, xi].
std::vector<double> scan_points(double xi, std::size_t n_points);

/// Minimizes E_b for each b in scan_points(xi, n_points) on a mesh with the
/// given outer radius, cell count and shell rule. Each solve starts from the
/// previous one mapped by rho_bar = a rho (same radial profile), a = b / b_bar.
/// An automatic gravity method uses the ring operator for every b so that all
/// entries share one discretization.
ScanResult scan_b(const ModelSpec& spec, double xi, std::size_t n_points, const RadialGrid& grid,
                  const SolverOptions& options);

}  // namespace rotstar
