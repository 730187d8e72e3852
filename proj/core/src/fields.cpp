#include "rotstar/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rotstar/errors.hpp"

namespace rotstar {

namespace {

constexpr double pi = std::numbers::pi;

// r^3 - (r^2 - s^2)_+^{3/2}, without cancellation for s << r.
double shell_cap(double r, double s) {
  if (r <= 0.0) return 0.0;
  if (s >= r) return r * r * r;
  const double x = (s / r) * (s / r);
  return -r * r * r * std::expm1(1.5 * std::log1p(-x));
}

double shell_cap_derivative(double r, double s) {
  // d/ds [r^3 - (r^2 - s^2)^{3/2}] = 3 s sqrt(r^2 - s^2)
  if (s >= r) return 0.0;
  return 3.0 * s * std::sqrt((r - s) * (r + s));
}

const GaussRule& unit_rule() {
  static const GaussRule rule = [] {
    GaussRule g = gauss_legendre(12);
    for (auto& x : g.nodes) x = 0.5 * (x + 1.0);
    for (auto& w : g.weights) w *= 0.5;
    return g;
  }();
  return rule;
}

template <typename Emit>
void plain_piece(double a, double b, Emit&& emit) {
  const auto& rule = unit_rule();
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) emit(a + (b - a) * rule.nodes[q], (b - a) * rule.weights[q]);
}

// Nodes on [a, b] with the square-root behaviour at b absorbed.
template <typename Emit>
void edge_piece(double a, double b, Emit&& emit) {
  const auto& rule = unit_rule();
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double w = rule.nodes[q];
    emit(b - (b - a) * w * w, 2.0 * (b - a) * w * rule.weights[q]);
  }
}

// [a, b] with a possibly tiny compared to b: geometric pieces up to b/2,
// then an edge piece.
template <typename Emit>
void graded_interval(double a, double b, Emit&& emit) {
  double lo = a;
  while (lo < 0.5 * b) {
    const double hi = std::min(2.0 * lo, 0.5 * b);
    plain_piece(lo, hi, emit);
    lo = hi;
  }
  edge_piece(lo, b, emit);
}

}  // namespace

// ---------------------------------------------------------------------------
// DensityProfile

DensityProfile::DensityProfile(RadialGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), rho_(std::move(values)) {
  if (rho_.size() != grid_.cells()) throw std::invalid_argument("density needs one value per cell");
  for (double v : rho_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("density must be finite and nonnegative");
  }
}

DensityProfile DensityProfile::zero(const RadialGrid& grid) {
  return DensityProfile(grid, std::vector<double>(grid.cells(), 0.0));
}

DensityProfile DensityProfile::uniform_ball(const RadialGrid& grid, double radius, double rho) {
  std::vector<double> v(grid.cells(), 0.0);
  const auto r = grid.midpoints();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = r[i] < radius ? rho : 0.0;
  return DensityProfile(grid, std::move(v));
}

double DensityProfile::total_mass() const { return cumulative_radial_integral(grid_, rho_).back(); }

double DensityProfile::max_density() const { return *std::max_element(rho_.begin(), rho_.end()); }

double DensityProfile::density_at(double r) const {
  if (r < 0.0 || r >= grid_.outer_radius()) return 0.0;
  return rho_[grid_.cell_of(r)];
}

double DensityProfile::support_extent() const {
  for (std::size_t i = rho_.size(); i-- > 0;) {
    if (rho_[i] > 0.0) return grid_.edges()[i + 1];
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Masses

std::vector<double> ellipsoidal_mass(const DensityProfile& profile) {
  return cumulative_radial_integral(profile.grid(), profile.values());
}

double ellipsoidal_mass_at(const DensityProfile& profile, double r) {
  const auto& grid = profile.grid();
  if (r <= 0.0) return 0.0;
  const auto edges = ellipsoidal_mass(profile);
  if (r >= grid.outer_radius()) return edges.back();
  const std::size_t i = grid.cell_of(r);
  return edges[i] + profile[i] * (grid.enclosed_volume(r) - grid.enclosed_volume(grid.edges()[i]));
}

CylindricalMass::CylindricalMass(const DensityProfile& profile)
    : b_(profile.grid().ellipticity()),
      dr_(profile.grid().spacing()),
      edges_(profile.grid().edges().begin(), profile.grid().edges().end()),
      rho_(profile.values().begin(), profile.values().end()),
      prefix_(ellipsoidal_mass(profile)) {}

double CylindricalMass::cell_fraction_volume(std::size_t k, double s) const {
  return 4.0 / 3.0 * pi * b_ * (shell_cap(edges_[k + 1], s) - shell_cap(edges_[k], s));
}

double CylindricalMass::operator()(double s) const {
  if (!(s >= 0.0)) throw std::invalid_argument("cylindrical radius must be nonnegative");
  const std::size_t n = rho_.size();
  // Cells with r_+ <= s lie entirely inside the cylinder.
  std::size_t k0 = std::min(static_cast<std::size_t>(s / dr_), n);
  while (k0 < n && edges_[k0 + 1] <= s) ++k0;
  while (k0 > 0 && edges_[k0] > s) --k0;
  double partial = 0.0;
  for (std::size_t j = k0; j < n; ++j) {
    if (rho_[j] != 0.0) partial += rho_[j] * (shell_cap(edges_[j + 1], s) - shell_cap(edges_[j], s));
  }
  return prefix_[k0] + 4.0 / 3.0 * pi * b_ * partial;
}

double CylindricalMass::derivative(double s) const {
  if (!(s >= 0.0)) throw std::invalid_argument("cylindrical radius must be nonnegative");
  const std::size_t n = rho_.size();
  std::size_t k0 = std::min(static_cast<std::size_t>(s / dr_), n);
  while (k0 > 0 && edges_[k0] > s) --k0;
  double sum = 0.0;
  for (std::size_t j = k0; j < n; ++j) {
    if (rho_[j] != 0.0) {
      sum += rho_[j] * (shell_cap_derivative(edges_[j + 1], s) - shell_cap_derivative(edges_[j], s));
    }
  }
  return 4.0 / 3.0 * pi * b_ * sum;
}

double cylindrical_mass(const DensityProfile& profile, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("cylindrical radius must be nonnegative");
  return CylindricalMass(profile)(s);
}

// ---------------------------------------------------------------------------
// Rotation

RotationIntegrals::RotationIntegrals(const DensityProfile& profile, const AngularMomentumProfile& angmom)
    : grid_(profile.grid()), angmom_(angmom), mass_(profile) {
  const auto edges = grid_.edges();
  const std::size_t n = grid_.cells();
  panels_.resize(n);
  edge_potential_.assign(n + 1, 0.0);
  if (angmom_.is_zero()) return;

  // Beyond the support m(s) = M_tot and the potential is L(M_tot) / (2 s^2).
  const double total_L = angmom_(mass_.total());
  const std::size_t active = grid_.cell_of(std::max(profile.support_extent(), edges[1]) - 0.5 * grid_.spacing()) + 1;
  for (std::size_t p = active; p <= n; ++p) edge_potential_[p] = total_L / (2.0 * edges[p] * edges[p]);
  support_ = edges[active];

  std::vector<double> panel_potential(active, 0.0);
  for (std::size_t p = 0; p < active; ++p) {
    auto& nodes = panels_[p];
    const auto emit = [&](double s, double w) { nodes.push_back({s, w, angmom_(mass_(s))}); };
    if (p == 0) {
      graded_interval(edges[1] * std::ldexp(1.0, -40), edges[1], emit);
    } else {
      edge_piece(edges[p], edges[p + 1], emit);
    }
    for (const auto& node : nodes) {
      panel_potential[p] += node.weight * node.L / (node.s * node.s * node.s);
      energy_ += 0.5 * node.weight * node.L / (node.s * node.s) * mass_.derivative(node.s);
    }
  }
  for (std::size_t p = active; p-- > 1;) edge_potential_[p] = edge_potential_[p + 1] + panel_potential[p];
}

double RotationIntegrals::partial_integral(double eta, double upper) const {
  double sum = 0.0;
  graded_interval(eta, upper, [&](double s, double w) { sum += w * angmom_(mass_(s)) / (s * s * s); });
  return sum;
}

double RotationIntegrals::potential(double eta) const {
  if (!(eta > 0.0)) throw std::invalid_argument("rotation potential needs eta > 0");
  if (angmom_.is_zero()) return 0.0;
  if (eta >= support_) return angmom_(mass_.total()) / (2.0 * eta * eta);
  const std::size_t p = grid_.cell_of(eta);
  const double upper = grid_.edges()[p + 1];
  return partial_integral(eta, upper) + edge_potential_[p + 1];
}

std::vector<double> RotationIntegrals::cell_average_potential() const {
  const std::size_t n = grid_.cells();
  std::vector<double> out(n, 0.0);
  if (angmom_.is_zero()) return out;
  const auto vol = grid_.volumes();
  // Integrating the potential against the cell's cylindrical-volume
  // distribution by parts gives
  //   avg_k = K(r_{k+}) + (1/V_k) int_0^{r_{k+}} C_k(s) L(m(s)) s^-3 ds.
  for (std::size_t k = 0; k < n; ++k) {
    double sum = 0.0;
    for (std::size_t p = 0; p <= k; ++p) {
      for (const auto& node : panels_[p]) {
        sum += node.weight * mass_.cell_fraction_volume(k, node.s) * node.L / (node.s * node.s * node.s);
      }
    }
    out[k] = edge_potential_[k + 1] + sum / vol[k];
    if (!std::isfinite(out[k])) {
      throw EvaluationError("non-finite rotation potential in cell " + std::to_string(k));
    }
  }
  return out;
}

double rotation_potential(const DensityProfile& profile, const AngularMomentumProfile& angmom, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("rotation potential needs eta > 0");
  return RotationIntegrals(profile, angmom).potential(eta);
}

double rotation_energy(const DensityProfile& profile, const AngularMomentumProfile& angmom) {
  return RotationIntegrals(profile, angmom).energy();
}

DensityProfile rescale_profile(const DensityProfile& profile, double a) {
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("rescaling factor must lie in (0, 1]");
  const auto& g = profile.grid();
  return DensityProfile(g.with_outer_radius(g.outer_radius() / a),
                        std::vector<double>(profile.values().begin(), profile.values().end()));
}

}  // namespace rotstar
