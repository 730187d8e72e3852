#pragma once

// Ellipsoidal-radius mesh. A point x is labelled by its ellipsoidal radius
// r_b = sqrt(eta^2 + z^2/b^2) and by u = sin(beta) on the shell, so that
//   eta = r sqrt(1 - u^2),  z = b r u,  dV = b r^2 dr du dtheta.
// The shell measure is uniform in u and shell integrals use Gauss-Legendre
// nodes in u.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rotstar {

struct GaussRule {
  std::vector<double> nodes;    // ascending in (-1, 1)
  std::vector<double> weights;  // sum to 2
};

/// n-point Gauss-Legendre rule on [-1, 1].
GaussRule gauss_legendre(std::size_t n);

struct ShellPoint {
  double eta;
  double z;
};

/// Point on the ellipsoidal shell of radius r at shell coordinate u.
ShellPoint shell_point(double r, double u, double b);
double ellipsoidal_radius(double eta, double z, double b);

class RadialGrid {
 public:
  RadialGrid(double b, double r_max, std::size_t cells, std::size_t shell_nodes);

  double ellipticity() const { return b_; }
  double outer_radius() const { return r_max_; }
  std::size_t cells() const { return midpoints_.size(); }
  std::size_t shell_nodes() const { return rule_.nodes.size(); }
  double spacing() const { return r_max_ / static_cast<double>(cells()); }

  std::span<const double> midpoints() const { return midpoints_; }
  std::span<const double> edges() const { return edges_; }
  std::span<const double> nodes() const { return rule_.nodes; }
  std::span<const double> weights() const { return rule_.weights; }
  /// Exact cell volumes (4/3) pi b (r_+^3 - r_-^3).
  std::span<const double> volumes() const { return volumes_; }

  /// Volume enclosed by the ellipsoid of radius r.
  double enclosed_volume(double r) const;
  /// Index of the cell containing r (clamped to the mesh).
  std::size_t cell_of(double r) const;

  /// Same mesh with a different ellipticity.
  RadialGrid with_ellipticity(double b) const;
  /// Same cell count and shell rule on [0, r_max].
  RadialGrid with_outer_radius(double r_max) const;

  bool same_mesh(const RadialGrid& other) const;

 private:
  double b_;
  double r_max_;
  std::vector<double> midpoints_;
  std::vector<double> edges_;
  std::vector<double> volumes_;
  GaussRule rule_;
};

/// Validated constructor: b > 0, r_max > 0, cells >= 8, shell_nodes >= 4.
RadialGrid build_grid(double b, double r_max, std::size_t cells, std::size_t shell_nodes);

/// Per-shell mean 1/2 sum_j w_j g(eta_j, z_j) at every cell midpoint.
/// Throws EvaluationError naming the node when g is not finite.
std::vector<double> shell_average(const RadialGrid& grid,
                                  const std::function<double(double eta, double z)>& g);

/// Running totals of values_i * V_i at the N+1 cell edges.
std::vector<double> cumulative_radial_integral(const RadialGrid& grid, std::span<const double> values);

}  // namespace rotstar
