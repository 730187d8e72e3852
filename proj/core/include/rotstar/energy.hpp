#pragma once

// The energy E_b = int A(rho) T(n) + 1/2 int rho L(m) eta^-2 - 1/2 int rho B rho,
// its potential function G = A'(rho) T(n) + Q + K_rot - K_grav, and the
// checks built on them.
//
// All cell quantities are exact for cellwise-constant densities: the
// internal energy integrates T(n) over each cell (n is linear in the cell
// volume there), and G is the exact gradient of the discrete energy divided
// by the cell volume.

#include <cstddef>
#include <span>
#include <vector>

#include "rotstar/fields.hpp"
#include "rotstar/gravity.hpp"
#include "rotstar/model.hpp"

namespace rotstar {

struct EnergyBreakdown {
  double internal = 0.0;
  double rotational = 0.0;
  double gravitational = 0.0;  // -1/2 int rho B rho
  double total = 0.0;
};

struct PotentialFunction {
  std::vector<double> marginal;      // A'(rho) T
  std::vector<double> entropy_tail;  // Q
  std::vector<double> rotation;      // K_rot
  std::vector<double> gravity;       // K_grav
  std::vector<double> values;        // G
};

/// Mesh-bound evaluator holding the gravity operator.
class EnergyModel {
 public:
  EnergyModel(ModelSpec spec, const RadialGrid& grid, GravityMethod method = GravityMethod::automatic,
              const RingOptions& ring = {});

  const ModelSpec& spec() const { return spec_; }
  const RadialGrid& grid() const { return op_.grid(); }
  const GravityOperator& gravity() const { return op_; }

  FieldSet fields(const DensityProfile& profile) const;
  EnergyBreakdown energy(const DensityProfile& profile) const;
  EnergyBreakdown energy(const DensityProfile& profile, const FieldSet& fields) const;
  PotentialFunction potential(const DensityProfile& profile, const FieldSet& fields) const;

 private:
  void check_mesh(const DensityProfile& profile) const;

  ModelSpec spec_;
  GravityOperator op_;
};

FieldSet compute_fields(const DensityProfile& profile, const ModelSpec& spec);
/// sum_i A(rho_i) V_i mean(T over cell i).
double internal_energy(const DensityProfile& profile, const ModelSpec& spec);
EnergyBreakdown total_energy(const DensityProfile& profile, const ModelSpec& spec);
PotentialFunction potential_function(const DensityProfile& profile, const ModelSpec& spec, const FieldSet& fields);

struct DerivativeSample {
  double t;
  double finite_difference;  // (E(rho + t sigma) - E(rho)) / t
  double predicted;          // int G sigma
  double gap;                // relative gap
};

struct DerivativeReport {
  std::vector<DerivativeSample> samples;
  double max_gap = 0.0;
};

/// Compares the one-sided difference quotient of E_b along sigma with
/// int G sigma. sigma must vanish on shells whose innermost node has
/// eta < epsilon or whose outer extent exceeds 1/epsilon, and be
/// nonnegative where rho = 0; otherwise std::invalid_argument.
DerivativeReport directional_derivative_check(const EnergyModel& model, const DensityProfile& profile,
                                              std::span<const double> sigma, std::span<const double> t_list,
                                              double epsilon = 1e-3);
DerivativeReport directional_derivative_check(const DensityProfile& profile, const ModelSpec& spec,
                                              std::span<const double> sigma, std::span<const double> t_list,
                                              double epsilon = 1e-3);

struct ElResidual {
  double interior = 0.0;  // max |G - lambda| where rho > floor
  double exterior = 0.0;  // max (lambda - G)_+ where rho <= floor
};

/// Floor is relative to max rho.
ElResidual el_residual(const DensityProfile& profile, const PotentialFunction& g, double lambda,
                       double relative_floor = 1e-12);
ElResidual el_residual(const DensityProfile& profile, const ModelSpec& spec, double lambda,
                       double relative_floor = 1e-12);

struct SteadyResidual {
  /// max |grad p - rho (grad B rho + L eta^-3 e_eta)| over the lattice,
  /// relative to max |rho grad B rho|.
  double pointwise = 0.0;
  /// Same normalization for the shell average of the radial projection,
  /// the part of the steady equation implied by shell-averaged stationarity.
  double shell_averaged = 0.0;
  std::size_t points = 0;
};

/// Steady-equation residual on an (eta, z) lattice inside the support.
/// The density is interpolated linearly between cell midpoints; gradients
/// use centered differences with step h = spacing / 2. Throws
/// std::invalid_argument when fewer than 4 shells carry density.
SteadyResidual steady_residual(const DensityProfile& profile, const ModelSpec& spec,
                               const RingOptions& ring = {});

}  // namespace rotstar
