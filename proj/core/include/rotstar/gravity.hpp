#pragma once

// Newtonian potential B rho = int rho(y) / |x - y| dy of an ellipsoidally
// symmetric density.
//
// The general path superposes axisymmetric rings: each source cell is
// integrated in r' with Gauss points and in u' adaptively, with the cells
// next to the field shell subdivided radially. For b = 1 there is also an
// exact path from Newton's shell theorem.

#include <cstddef>
#include <span>
#include <vector>

#include "rotstar/fields.hpp"
#include "rotstar/geometry.hpp"

namespace rotstar {

/// Complete elliptic integral of the first kind K(m), m = k^2 in [0, 1),
/// by the arithmetic-geometric mean.
double elliptic_k(double m);

/// Potential at (eta, z) of a ring of the given mass through (eta_s, z_s).
/// Throws std::invalid_argument when the field point lies on the ring.
double ring_potential(double eta, double z, double eta_s, double z_s, double mass);

struct RingOptions {
  std::size_t near_subdivision = 8;  // radial pieces for cells next to the field shell
  std::size_t near_band = 1;         // |i - k| <= near_band counts as near
  std::size_t radial_points = 4;     // Gauss points in r' per piece
  double tolerance = 1e-10;          // relative tolerance of the u' integrals
  bool estimate_error = false;       // repeat near cells at half the subdivision
};

enum class GravityMethod { automatic, ring, spherical };

/// Linear map from cell densities to the potential. Built once per mesh.
class GravityOperator {
 public:
  /// Ring superposition on any mesh.
  static GravityOperator ring(const RadialGrid& grid, const RingOptions& options = {});
  /// Shell-theorem operator; requires b == 1.
  static GravityOperator spherical(const RadialGrid& grid);
  /// spherical when b == 1 and the method is automatic.
  static GravityOperator make(const RadialGrid& grid, GravityMethod method, const RingOptions& options = {});

  const RadialGrid& grid() const { return grid_; }
  bool is_spherical() const { return spherical_; }

  /// Cell-averaged potential K_grav, consistent with energy(): the gradient
  /// of energy() with respect to rho_i is V_i K_i.
  std::vector<double> shell_potential(std::span<const double> rho) const;
  /// B rho at the shell nodes, index i * n_beta + j.
  std::vector<double> node_potential(std::span<const double> rho) const;
  /// 1/2 int rho B rho.
  double energy(std::span<const double> rho) const;

  /// Largest relative change of the shell operator's near-cell entries when
  /// the subdivision is halved (0 when not estimated or spherical).
  double error_estimate() const { return error_estimate_; }

 private:
  GravityOperator(RadialGrid grid) : grid_(std::move(grid)) {}

  RadialGrid grid_;
  bool spherical_ = false;
  std::vector<double> nodes_;  // (N * n_beta) x N, row-major
  std::vector<double> shells_;  // N x N, symmetric after scaling by volumes
  double error_estimate_ = 0.0;
};

/// B rho on the shell nodes with its shell averages.
struct PotentialField {
  RadialGrid grid;
  std::vector<double> nodes;   // B rho(r_i, u_j) at i * n_beta + j
  std::vector<double> shells;  // K_grav per cell
  double error_estimate = 0.0;

  double at(std::size_t i, std::size_t j) const { return nodes[i * grid.shell_nodes() + j]; }
};

/// Ring-kernel potential of the profile (any b).
PotentialField potential_field(const DensityProfile& profile, const RingOptions& options = {});
/// Field from an existing operator.
PotentialField potential_field(const GravityOperator& op, const DensityProfile& profile);

/// B rho at an arbitrary point by ring superposition.
double potential_at(const DensityProfile& profile, double eta, double z, const RingOptions& options = {});

/// Shell-theorem potential at the cell midpoints; b must be 1.
std::vector<double> spherical_potential(const DensityProfile& profile);
/// Shell-theorem potential at radius r; b must be 1.
double spherical_potential_at(const DensityProfile& profile, double r);

/// Central potential of a uniform ellipsoid with semi-axes (a, a, b a),
/// density rho_star and mass M.
double uniform_ellipsoid_center(double b, double M, double rho_star);

/// 1/2 int rho B rho from a field computed on the same mesh.
double grav_energy(const DensityProfile& profile, const PotentialField& field);

/// (int rho B rho) / (int rho^{4/3} (int rho)^{2/3}).
double hls_ratio(const DensityProfile& profile);

}  // namespace rotstar
