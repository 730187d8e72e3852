#pragma once

// Density profiles on the ellipsoidal mesh and the quantities derived from
// them without gravity: ellipsoidal mass n(r), cylindrical mass m(s) and the
// rotation terms built on L(m).
//
// Densities are cellwise constant. Every mass function below is the exact
// integral of that cellwise-constant density, so scaling identities and
// monotonicity hold to rounding.

#include <cstddef>
#include <span>
#include <vector>

#include "rotstar/geometry.hpp"
#include "rotstar/model.hpp"

namespace rotstar {

class DensityProfile {
 public:
  /// Throws std::invalid_argument on a size mismatch or a negative or
  /// non-finite value.
  DensityProfile(RadialGrid grid, std::vector<double> values);
  static DensityProfile zero(const RadialGrid& grid);
  /// Constant density rho inside r_b <= radius (cells whose midpoint is
  /// inside).
  static DensityProfile uniform_ball(const RadialGrid& grid, double radius, double rho);

  const RadialGrid& grid() const { return grid_; }
  std::span<const double> values() const { return rho_; }
  double operator[](std::size_t i) const { return rho_[i]; }
  std::size_t size() const { return rho_.size(); }

  double total_mass() const;
  double max_density() const;
  /// Density at ellipsoidal radius r (cellwise constant, 0 beyond the mesh).
  double density_at(double r) const;
  /// Outer edge of the last cell with nonzero density (0 for the zero profile).
  double support_extent() const;

 private:
  RadialGrid grid_;
  std::vector<double> rho_;
};

/// n(r) at the N+1 cell edges.
std::vector<double> ellipsoidal_mass(const DensityProfile& profile);
/// n(r) at an arbitrary radius.
double ellipsoidal_mass_at(const DensityProfile& profile, double r);

/// Exact cylindrical mass of a cellwise-constant ellipsoidal density.
///
/// The fraction of the shell measure at radius r with eta < s is
/// 1 - sqrt(1 - (s/r)^2), so a cell [r-, r+] contributes
///   (4 pi b / 3) [r+^3 - r-^3 - (r+^2 - s^2)_+^{3/2} + (r-^2 - s^2)_+^{3/2}].
class CylindricalMass {
 public:
  explicit CylindricalMass(const DensityProfile& profile);

  double operator()(double s) const;
  double derivative(double s) const;
  double total() const { return prefix_.back(); }

  /// Volume of cell k lying inside the cylinder eta < s.
  double cell_fraction_volume(std::size_t k, double s) const;

 private:
  double b_;
  double dr_;
  std::vector<double> edges_;
  std::vector<double> rho_;
  std::vector<double> prefix_;  // mass of cells [0, k)
};

double cylindrical_mass(const DensityProfile& profile, double s);

/// Quadrature over the cylindrical radius s for the rotation terms.
///
/// Panels run between consecutive cell edges; the substitution
/// s = r_{p+1} - (r_{p+1} - r_p) w^2 absorbs the square-root behaviour of m(s)
/// at each edge, and the first panel is graded geometrically towards the
/// axis.
class RotationIntegrals {
 public:
  RotationIntegrals(const DensityProfile& profile, const AngularMomentumProfile& angmom);

  /// int_eta^infty L(m(s)) s^-3 ds, eta > 0.
  double potential(double eta) const;
  /// Volume average of the rotation potential over each cell.
  std::vector<double> cell_average_potential() const;
  /// 1/2 int rho L(m(eta)) eta^-2 dx = 1/2 int L(m(s)) s^-2 dm(s).
  double energy() const { return energy_; }

 private:
  struct Node {
    double s;
    double weight;
    double L;  // L(m(s))
  };

  double partial_integral(double eta, double upper) const;

  RadialGrid grid_;
  AngularMomentumProfile angmom_;
  CylindricalMass mass_;
  std::vector<std::vector<Node>> panels_;
  std::vector<double> edge_potential_;  // potential at each edge r_p, p >= 1
  double support_ = 0.0;                // m(s) = M_tot beyond this edge
  double energy_ = 0.0;
};

/// Pointwise rotation potential (third term of the potential function).
/// Throws std::invalid_argument for eta <= 0.
double rotation_potential(const DensityProfile& profile, const AngularMomentumProfile& angmom, double eta);
double rotation_energy(const DensityProfile& profile, const AngularMomentumProfile& angmom);

/// rho_bar(r) = rho(a r) on the mesh dilated by 1/a, 0 < a <= 1.
DensityProfile rescale_profile(const DensityProfile& profile, double a);

/// Derived fields on the mesh. Cell quantities are volume averages over the
/// cell; edge quantities live on the N+1 edges.
struct FieldSet {
  std::vector<double> n_edges;       // ellipsoidal mass at edges
  std::vector<double> n_mid;         // ellipsoidal mass at midpoints
  std::vector<double> m_mid;         // cylindrical mass m(r_i)
  std::vector<double> mean_T;        // mean of T(n) over each cell
  std::vector<double> entropy_tail;  // Q: int_{r_b(y) > r} A(rho) T'(n) dy
  std::vector<double> rotation;      // K_rot
  std::vector<double> gravity;       // K_grav
  double rotational_energy = 0.0;
};

}  // namespace rotstar
