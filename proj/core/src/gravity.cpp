#include "rotstar/gravity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rotstar/errors.hpp"

namespace rotstar {

namespace {

constexpr double pi = std::numbers::pi;

// K from the complementary parameter m1 = 1 - m.
double elliptic_k_complement(double m1) {
  double a = 1.0;
  double g = std::sqrt(m1);
  while (std::abs(a - g) > 1e-14 * a) {
    const double an = 0.5 * (a + g);
    g = std::sqrt(a * g);
    a = an;
  }
  return pi / (2.0 * a);
}

// int_0^{2 pi} dtheta / |x - y| for the ring through (eta_s, z_s).
double ring_kernel(double eta, double z, double eta_s, double z_s) {
  const double dz2 = (z - z_s) * (z - z_s);
  const double sum = eta + eta_s;
  const double diff = eta - eta_s;
  const double d2 = sum * sum + dz2;
  const double m1 = (diff * diff + dz2) / d2;
  return 4.0 * elliptic_k_complement(m1) / std::sqrt(d2);
}

// int_{-1}^{1} du' ring_kernel over the shell of radius rp; the two halves
// u' and -u' are folded onto [0, 1] and split at the field point's |u|.
double shell_integral(double eta, double z, double rp, double b, double u_split, double tol) {
  const auto f = [&](double u) {
    const double ep = rp * std::sqrt((1.0 - u) * (1.0 + u));
    const double zp = b * rp * u;
    return ring_kernel(eta, z, ep, zp) + ring_kernel(eta, z, ep, -zp);
  };
  using boost::math::quadrature::gauss_kronrod;
  const double s = std::clamp(std::abs(u_split), 0.0, 1.0);
  double total = 0.0;
  if (s > 0.0) total += gauss_kronrod<double, 15>::integrate(f, 0.0, s, 15, tol);
  if (s < 1.0) total += gauss_kronrod<double, 15>::integrate(f, s, 1.0, 15, tol);
  return total;
}

// Potential at (eta, z) of unit density on the ellipsoidal layer [lo, hi].
// The layer is cut into `pieces` equal parts and additionally at r_field when
// it falls inside.
double layer_potential(double eta, double z, double r_field, double u_split, double lo, double hi,
                       std::size_t pieces, const GaussRule& rule, double b, double tol) {
  const auto integrate = [&](double a, double c, std::size_t parts) {
    double sum = 0.0;
    const double h = (c - a) / static_cast<double>(parts);
    for (std::size_t p = 0; p < parts; ++p) {
      const double x0 = a + h * static_cast<double>(p);
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double rp = x0 + 0.5 * h * (rule.nodes[q] + 1.0);
        sum += 0.5 * h * rule.weights[q] * b * rp * rp * shell_integral(eta, z, rp, b, u_split, tol);
      }
    }
    return sum;
  };
  if (r_field > lo && r_field < hi) {
    const std::size_t half = std::max<std::size_t>(1, pieces / 2);
    return integrate(lo, r_field, half) + integrate(r_field, hi, half);
  }
  return integrate(lo, hi, pieces);
}

// Potential of unit density on the spherical layer [a, c] at radius r.
double spherical_layer(double r, double a, double c) {
  if (r >= c) return 4.0 / 3.0 * pi * (c * c * c - a * a * a) / r;
  if (r <= a) return 2.0 * pi * (c * c - a * a);
  const double inner = r > 0.0 ? (r * r * r - a * a * a) / (3.0 * r) : 0.0;
  return 4.0 * pi * (inner + 0.5 * (c * c - r * r));
}

void require_spherical(const RadialGrid& grid) {
  if (grid.ellipticity() != 1.0) throw std::invalid_argument("spherical potential requires b = 1");
}

}  // namespace

double elliptic_k(double m) {
  if (!(m >= 0.0 && m < 1.0)) throw std::invalid_argument("elliptic parameter must lie in [0, 1)");
  return elliptic_k_complement(1.0 - m);
}

double ring_potential(double eta, double z, double eta_s, double z_s, double mass) {
  if (eta == eta_s && z == z_s) throw std::invalid_argument("field point lies on the ring");
  return mass / (2.0 * pi) * ring_kernel(eta, z, eta_s, z_s);
}

GravityOperator GravityOperator::ring(const RadialGrid& grid, const RingOptions& options) {
  if (options.near_subdivision == 0 || options.radial_points == 0 || !(options.tolerance > 0.0)) {
    throw std::invalid_argument("invalid ring options");
  }
  GravityOperator op(grid);
  const std::size_t n = grid.cells();
  const std::size_t nb = grid.shell_nodes();
  const double b = grid.ellipticity();
  const auto r = grid.midpoints();
  const auto edges = grid.edges();
  const auto u = grid.nodes();
  const auto w = grid.weights();
  const auto vol = grid.volumes();
  const GaussRule rule = gauss_legendre(options.radial_points);
  const std::size_t coarse = std::max<std::size_t>(1, options.near_subdivision / 2);

  op.nodes_.assign(n * nb * n, 0.0);
  std::vector<double> coarse_rows(options.estimate_error ? n * n : 0, 0.0);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      const std::size_t mirror = nb - 1 - j;
      if (u[j] < 0.0 && u[mirror] == -u[j]) continue;
      const auto p = shell_point(r[i], u[j], b);
      double* row = &op.nodes_[(i * nb + j) * n];
      for (std::size_t k = 0; k < n; ++k) {
        const bool near = (i > k ? i - k : k - i) <= options.near_band;
        const std::size_t pieces = near ? options.near_subdivision : 1;
        row[k] = layer_potential(p.eta, p.z, r[i], u[j], edges[k], edges[k + 1], pieces, rule, b, options.tolerance);
        if (near && options.estimate_error) {
          const double c = layer_potential(p.eta, p.z, r[i], u[j], edges[k], edges[k + 1], coarse, rule, b,
                                           options.tolerance);
          const double weight = (u[j] != 0.0 && u[mirror] == -u[j]) ? 2.0 : 1.0;
          coarse_rows[i * n + k] += 0.5 * weight * w[j] * (c - row[k]);
        }
      }
      if (mirror != j && u[mirror] == -u[j]) {
        std::copy(row, row + n, &op.nodes_[(i * nb + mirror) * n]);
      }
    }
  }

  // Shell averages, then symmetrize V_i S_ik so that the shell operator is
  // the exact gradient of the quadratic energy.
  std::vector<double> s(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      const double* row = &op.nodes_[(i * nb + j) * n];
      for (std::size_t k = 0; k < n; ++k) s[i * n + k] += 0.5 * w[j] * row[k];
    }
  }
  op.shells_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      op.shells_[i * n + k] = 0.5 * (vol[i] * s[i * n + k] + vol[k] * s[k * n + i]) / vol[i];
    }
  }
  if (options.estimate_error) {
    for (std::size_t i = 0; i < n; ++i) {
      double total = 0.0, delta = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        total += s[i * n + k];
        delta += coarse_rows[i * n + k];
      }
      op.error_estimate_ = std::max(op.error_estimate_, std::abs(delta) / total);
    }
  }
  return op;
}

GravityOperator GravityOperator::spherical(const RadialGrid& grid) {
  require_spherical(grid);
  GravityOperator op(grid);
  op.spherical_ = true;
  const std::size_t n = grid.cells();
  const auto r = grid.midpoints();
  const auto e = grid.edges();
  const auto vol = grid.volumes();
  op.nodes_.assign(n * n, 0.0);
  op.shells_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) op.nodes_[i * n + k] = spherical_layer(r[i], e[k], e[k + 1]);
  }
  // Exact cell averages of the layer potentials.
  for (std::size_t k = 0; k < n; ++k) {
    const double a = e[k], c = e[k + 1];
    for (std::size_t j = 0; j < n; ++j) {
      double v;
      if (j < k) {
        v = 2.0 * pi * (c * c - a * a) * vol[j] / vol[k];
      } else if (j > k) {
        v = 2.0 * pi * (e[j + 1] * e[j + 1] - e[j] * e[j]);
      } else {
        const double a2 = a * a, a3 = a2 * a, c2 = c * c, c3 = c2 * c;
        const double a5 = a3 * a2, c5 = c3 * c2;
        const double inner = 16.0 * pi * pi / 3.0 * ((c5 - a5) / 5.0 - a3 * (c2 - a2) / 2.0);
        const double outer = 8.0 * pi * pi * (c2 * (c3 - a3) / 3.0 - (c5 - a5) / 5.0);
        v = (inner + outer) / vol[k];
      }
      op.shells_[k * n + j] = v;
    }
  }
  return op;
}

GravityOperator GravityOperator::make(const RadialGrid& grid, GravityMethod method, const RingOptions& options) {
  switch (method) {
    case GravityMethod::spherical:
      return spherical(grid);
    case GravityMethod::ring:
      return ring(grid, options);
    case GravityMethod::automatic:
      break;
  }
  return grid.ellipticity() == 1.0 ? spherical(grid) : ring(grid, options);
}

std::vector<double> GravityOperator::shell_potential(std::span<const double> rho) const {
  const std::size_t n = grid_.cells();
  if (rho.size() != n) throw std::invalid_argument("density does not match the gravity mesh");
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = &shells_[i * n];
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += row[k] * rho[k];
    out[i] = sum;
  }
  return out;
}

std::vector<double> GravityOperator::node_potential(std::span<const double> rho) const {
  const std::size_t n = grid_.cells();
  const std::size_t nb = grid_.shell_nodes();
  if (rho.size() != n) throw std::invalid_argument("density does not match the gravity mesh");
  std::vector<double> out(n * nb, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      const double* row = spherical_ ? &nodes_[i * n] : &nodes_[(i * nb + j) * n];
      double sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) sum += row[k] * rho[k];
      out[i * nb + j] = sum;
    }
  }
  return out;
}

double GravityOperator::energy(std::span<const double> rho) const {
  const auto k = shell_potential(rho);
  const auto vol = grid_.volumes();
  double e = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) e += rho[i] * vol[i] * k[i];
  return 0.5 * e;
}

PotentialField potential_field(const GravityOperator& op, const DensityProfile& profile) {
  if (!op.grid().same_mesh(profile.grid())) throw std::invalid_argument("profile does not match the gravity mesh");
  PotentialField field{op.grid(), op.node_potential(profile.values()), op.shell_potential(profile.values()),
                       op.error_estimate()};
  for (std::size_t i = 0; i < field.nodes.size(); ++i) {
    if (!std::isfinite(field.nodes[i])) {
      throw EvaluationError("non-finite potential at shell " + std::to_string(i / field.grid.shell_nodes()) +
                            ", node " + std::to_string(i % field.grid.shell_nodes()));
    }
  }
  return field;
}

PotentialField potential_field(const DensityProfile& profile, const RingOptions& options) {
  RingOptions opts = options;
  opts.estimate_error = true;
  return potential_field(GravityOperator::ring(profile.grid(), opts), profile);
}

double potential_at(const DensityProfile& profile, double eta, double z, const RingOptions& options) {
  const auto& grid = profile.grid();
  const double b = grid.ellipticity();
  const double rb = ellipsoidal_radius(eta, z, b);
  const double u_split = rb > 0.0 ? std::clamp(z / (b * rb), -1.0, 1.0) : 0.0;
  const auto edges = grid.edges();
  const GaussRule rule = gauss_legendre(options.radial_points);
  const double home = rb / grid.spacing() - 0.5;
  double sum = 0.0;
  for (std::size_t k = 0; k < grid.cells(); ++k) {
    if (profile[k] == 0.0) continue;
    const bool near = std::abs(static_cast<double>(k) - home) <= static_cast<double>(options.near_band) + 0.5;
    const std::size_t pieces = near ? options.near_subdivision : 1;
    sum += profile[k] *
           layer_potential(eta, z, rb, u_split, edges[k], edges[k + 1], pieces, rule, b, options.tolerance);
  }
  return sum;
}

std::vector<double> spherical_potential(const DensityProfile& profile) {
  require_spherical(profile.grid());
  const auto r = profile.grid().midpoints();
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = spherical_potential_at(profile, r[i]);
  return out;
}

double spherical_potential_at(const DensityProfile& profile, double r) {
  require_spherical(profile.grid());
  if (!(r >= 0.0)) throw std::invalid_argument("radius must be nonnegative");
  const auto e = profile.grid().edges();
  double sum = 0.0;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    if (profile[k] != 0.0) sum += profile[k] * spherical_layer(r, e[k], e[k + 1]);
  }
  return sum;
}

double uniform_ellipsoid_center(double b, double M, double rho_star) {
  if (!(b > 0.0 && M > 0.0 && rho_star > 0.0)) throw std::invalid_argument("b, M and density must be positive");
  double shape;
  if (std::abs(b - 1.0) < 1e-6) {
    shape = 1.0 - (b - 1.0) / 3.0;
  } else if (b > 1.0) {
    const double s = std::sqrt(b * b - 1.0);
    shape = std::log(b + s) / s;
  } else {
    const double s = std::sqrt(1.0 - b * b);
    shape = std::asin(s) / s;
  }
  return std::cbrt(4.5 * pi * M * M * rho_star) * std::cbrt(b) * shape;
}

double grav_energy(const DensityProfile& profile, const PotentialField& field) {
  if (!field.grid.same_mesh(profile.grid())) throw std::invalid_argument("field and profile meshes differ");
  const auto vol = profile.grid().volumes();
  double e = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) e += profile[i] * vol[i] * field.shells[i];
  return 0.5 * e;
}

double hls_ratio(const DensityProfile& profile) {
  const auto& grid = profile.grid();
  const auto vol = grid.volumes();
  double mass = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    mass += profile[i] * vol[i];
    norm += std::pow(profile[i], 4.0 / 3.0) * vol[i];
  }
  if (!(mass > 0.0)) throw std::invalid_argument("ratio undefined for the zero profile");
  const auto op = GravityOperator::make(grid, GravityMethod::automatic);
  return 2.0 * op.energy(profile.values()) / (norm * std::cbrt(mass * mass));
}

}  // namespace rotstar
