#include "rotstar/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rotstar/errors.hpp"

namespace rotstar {

GaussRule gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Gauss rule needs at least one node");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess for the i-th largest root, then Newton.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double dk = static_cast<double>(k);
        const double p2 = ((2.0 * dk - 1.0) * x * p1 - (dk - 1.0) * p0) / dk;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = dn * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double dk = static_cast<double>(k);
      const double p2 = ((2.0 * dk - 1.0) * x * p1 - (dk - 1.0) * p0) / dk;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : dn * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

ShellPoint shell_point(double r, double u, double b) {
  if (!(std::abs(u) <= 1.0)) throw std::invalid_argument("shell coordinate u must lie in [-1, 1]");
  if (!(r >= 0.0)) throw std::invalid_argument("radius must be nonnegative");
  return {r * std::sqrt((1.0 - u) * (1.0 + u)), b * r * u};
}

double ellipsoidal_radius(double eta, double z, double b) { return std::hypot(eta, z / b); }

RadialGrid::RadialGrid(double b, double r_max, std::size_t cells, std::size_t shell_nodes)
    : b_(b), r_max_(r_max), rule_(gauss_legendre(shell_nodes)) {
  const double dr = r_max / static_cast<double>(cells);
  edges_.resize(cells + 1);
  midpoints_.resize(cells);
  volumes_.resize(cells);
  for (std::size_t k = 0; k <= cells; ++k) edges_[k] = dr * static_cast<double>(k);
  edges_.back() = r_max;
  for (std::size_t i = 0; i < cells; ++i) {
    midpoints_[i] = dr * (static_cast<double>(i) + 0.5);
    volumes_[i] = enclosed_volume(edges_[i + 1]) - enclosed_volume(edges_[i]);
  }
}

double RadialGrid::enclosed_volume(double r) const { return 4.0 / 3.0 * std::numbers::pi * b_ * r * r * r; }

std::size_t RadialGrid::cell_of(double r) const {
  if (r <= 0.0) return 0;
  const auto i = static_cast<std::size_t>(r / spacing());
  return std::min(i, cells() - 1);
}

RadialGrid RadialGrid::with_ellipticity(double b) const { return RadialGrid(b, r_max_, cells(), shell_nodes()); }

RadialGrid RadialGrid::with_outer_radius(double r_max) const {
  return RadialGrid(b_, r_max, cells(), shell_nodes());
}

bool RadialGrid::same_mesh(const RadialGrid& other) const {
  return b_ == other.b_ && r_max_ == other.r_max_ && cells() == other.cells() &&
         shell_nodes() == other.shell_nodes();
}

RadialGrid build_grid(double b, double r_max, std::size_t cells, std::size_t shell_nodes) {
  if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("grid ellipticity must be positive");
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw std::invalid_argument("grid radius must be positive");
  if (cells < 8) throw std::invalid_argument("grid needs at least 8 cells");
  if (shell_nodes < 4) throw std::invalid_argument("grid needs at least 4 shell nodes");
  return RadialGrid(b, r_max, cells, shell_nodes);
}

std::vector<double> shell_average(const RadialGrid& grid, const std::function<double(double, double)>& g) {
  const auto r = grid.midpoints();
  const auto u = grid.nodes();
  const auto w = grid.weights();
  std::vector<double> out(grid.cells(), 0.0);
  for (std::size_t i = 0; i < grid.cells(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
      const auto p = shell_point(r[i], u[j], grid.ellipticity());
      const double v = g(p.eta, p.z);
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "non-finite shell integrand at shell " << i << ", node " << j << " (eta=" << p.eta
            << ", z=" << p.z << ")";
        throw EvaluationError(msg.str());
      }
      sum += w[j] * v;
    }
    out[i] = 0.5 * sum;
  }
  return out;
}

std::vector<double> cumulative_radial_integral(const RadialGrid& grid, std::span<const double> values) {
  if (values.size() != grid.cells()) throw std::invalid_argument("one value per cell required");
  const auto vol = grid.volumes();
  std::vector<double> out(grid.cells() + 1, 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) out[i + 1] = out[i] + values[i] * vol[i];
  return out;
}

}  // namespace rotstar
