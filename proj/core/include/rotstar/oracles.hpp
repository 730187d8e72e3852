#pragma once

// Independent reference values used to validate the main evaluators:
// Lane-Emden polytropes, Monte Carlo integrals, homoeoid potentials of
// ellipsoidal densities and 1-D adaptive quadrature. Nothing here calls the
// gravity, fields or energy code paths.

#include <cstdint>
#include <functional>
#include <vector>

#include "rotstar/fields.hpp"
#include "rotstar/geometry.hpp"

namespace rotstar {

/// Spherical polytrope p = K rho^gamma under Delta Phi = 4 pi rho:
/// rho(r) = rho_c theta(r / alpha)^n, n = 1 / (gamma - 1).
struct LaneEmdenSolution {
  double K = 1.0;
  double gamma = 2.0;
  double mass = 1.0;
  double alpha = 0.0;            // length scale
  double xi1 = 0.0;              // first zero of theta
  double omega = 0.0;            // -xi1^2 theta'(xi1)
  double central_density = 0.0;
  double surface = 0.0;          // alpha xi1
  std::vector<double> xi;        // numeric table (empty for the closed form)
  std::vector<double> theta;
  std::vector<double> dtheta;

  double density(double r) const;
  /// Mass inside radius r.
  double enclosed_mass(double r) const;
  /// Surface value of -Phi, which equals the multiplier for a minimizer.
  double multiplier() const { return -mass / surface; }
};

/// Closed form for gamma = 2, RK4 otherwise. gamma must lie in (6/5, 2] and
/// differ from 4/3 (the mass is then independent of rho_c).
LaneEmdenSolution lane_emden(double K, double gamma, double M);
/// RK4 on theta'' + 2 theta'/xi = -theta^n with step h from a series start.
LaneEmdenSolution lane_emden_numeric(double K, double gamma, double M, double h = 1e-4);

/// Cell averages of the solution on a b = 1 mesh (exact total mass when the
/// surface lies inside the mesh).
DensityProfile lane_emden_profile(double K, double gamma, double M, const RadialGrid& grid);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// int rho(y) / |x - y| dy by uniform sampling of the support ellipsoid.
MonteCarloEstimate monte_carlo_potential(const DensityProfile& profile, double eta, double z, std::size_t n_samples,
                                         std::uint64_t seed);
/// Mass inside the cylinder eta < s.
MonteCarloEstimate monte_carlo_cyl_mass(const DensityProfile& profile, double s, std::size_t n_samples,
                                        std::uint64_t seed);
/// 1/2 int rho L(m(eta)) eta^-2 with a caller-supplied m.
MonteCarloEstimate monte_carlo_rotation_energy(const DensityProfile& profile, const std::function<double(double)>& L,
                                               const std::function<double(double)>& m, std::size_t n_samples,
                                               std::uint64_t seed);

/// int_eta^infty L(m(s)) s^-3 ds by adaptive quadrature on [eta, support]
/// plus the exact tail L(m_total) / (2 support^2).
double quadrature_rotation_potential(const std::function<double(double)>& L, const std::function<double(double)>& m,
                                     double eta, double support);

/// Closed-form cylindrical mass of a uniform ellipsoid of radius R.
double uniform_ellipsoid_cyl_mass(double b, double R, double rho, double s);

/// Shape factor g(b): the interior potential of a thin homoeoid of radius r
/// and mass dm is g(b) dm / r.
double homoeoid_factor(double b);

/// Shell averages at the cell midpoints, g(b) [n(r)/r + 4 pi b int_r rho t dt].
std::vector<double> homoeoid_shell_potential(const DensityProfile& profile);

/// Pointwise B rho of a cellwise-constant ellipsoidal density from the
/// potential of uniform solid ellipsoids.
double ellipsoid_potential(const DensityProfile& profile, double eta, double z);

/// 1/2 int rho B rho of a uniform ellipsoid with semi-axes (R, R, b R).
double uniform_ellipsoid_self_energy(double b, double rho, double R);

}  // namespace rotstar
