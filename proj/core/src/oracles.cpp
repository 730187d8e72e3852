#include "rotstar/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace rotstar {

namespace {

constexpr double pi = std::numbers::pi;

void check_gamma(double gamma) {
  if (!(gamma > 1.2 && gamma <= 2.0)) throw std::invalid_argument("Lane-Emden needs gamma in (6/5, 2]");
  if (std::abs(gamma - 4.0 / 3.0) < 1e-12) throw std::invalid_argument("gamma = 4/3 does not fix the central density");
}

struct Hermite {
  double value;
  double slope;
};

// Cubic Hermite interpolation on [x0, x1].
Hermite hermite(double x0, double x1, double y0, double y1, double d0, double d1, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double v = (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
                   (t3 - t2) * h * d1;
  const double s = ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * h * d0 + (-6 * t2 + 6 * t) * y1 +
                    (3 * t2 - 2 * t) * h * d1) /
                   h;
  return {v, s};
}

double index_of(double gamma) { return 1.0 / (gamma - 1.0); }

double theta_second(double xi, double theta, double dtheta, double n) {
  return -std::pow(std::max(theta, 0.0), n) - 2.0 * dtheta / xi;
}

// Interpolated theta and theta' at xi from the numeric table.
Hermite table_lookup(const LaneEmdenSolution& s, double xi) {
  const auto it = std::upper_bound(s.xi.begin(), s.xi.end(), xi);
  const std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(it - s.xi.begin()), 1, s.xi.size() - 1) - 1;
  return hermite(s.xi[k], s.xi[k + 1], s.theta[k], s.theta[k + 1], s.dtheta[k], s.dtheta[k + 1], xi);
}

void finish(LaneEmdenSolution& s) {
  const double n = index_of(s.gamma);
  // M = 4 pi omega ((n+1) K / 4 pi)^{3/2} rho_c^{(3-n)/(2n)}
  const double scale = 4.0 * pi * s.omega * std::pow((n + 1.0) * s.K / (4.0 * pi), 1.5);
  s.central_density = std::pow(s.mass / scale, 2.0 * n / (3.0 - n));
  s.alpha = std::sqrt((n + 1.0) * s.K * std::pow(s.central_density, 1.0 / n - 1.0) / (4.0 * pi));
  s.surface = s.alpha * s.xi1;
}

std::mt19937_64 make_engine(std::uint64_t seed) { return std::mt19937_64(seed); }

template <typename F>
MonteCarloEstimate sample_support(const DensityProfile& profile, std::size_t n_samples, std::uint64_t seed, F&& f) {
  if (n_samples < 2) throw std::invalid_argument("need at least two samples");
  const double b = profile.grid().ellipticity();
  const double R = profile.support_extent();
  if (R == 0.0) return {};
  auto engine = make_engine(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    double x, y, z;
    do {
      x = unit(engine);
      y = unit(engine);
      z = unit(engine);
    } while (x * x + y * y + z * z > 1.0);
    x *= R;
    y *= R;
    z *= b * R;
    double v;
    while (!f(x, y, z, v)) {
      do {
        x = unit(engine);
        y = unit(engine);
        z = unit(engine);
      } while (x * x + y * y + z * z > 1.0);
      x *= R;
      y *= R;
      z *= b * R;
    }
    sum += v;
    sum2 += v * v;
  }
  const double dn = static_cast<double>(n_samples);
  const double mean = sum / dn;
  const double var = std::max(0.0, (sum2 / dn - mean * mean) * dn / (dn - 1.0));
  const double volume = 4.0 / 3.0 * pi * b * R * R * R;
  return {volume * mean, volume * std::sqrt(var / dn)};
}

double density_at_point(const DensityProfile& profile, double x, double y, double z) {
  const double b = profile.grid().ellipticity();
  return profile.density_at(std::sqrt(x * x + y * y + z * z / (b * b)));
}

// Potential at (eta, z) of the uniform solid ellipsoid with semi-axes
// (a, a, b a) and unit density.
double solid_ellipsoid_potential(double a, double b, double eta, double z) {
  if (a == 0.0) return 0.0;
  const double a2 = a * a, c2 = b * b * a2;
  const double e2 = eta * eta, z2 = z * z;
  double lambda = 0.0;
  if (e2 / a2 + z2 / c2 > 1.0) {
    const double p = a2 + c2 - e2 - z2;
    const double q = a2 * c2 - e2 * c2 - z2 * a2;
    lambda = 0.5 * (-p + std::sqrt(p * p - 4.0 * q));
  }
  const auto f = [&](double t) {
    return (1.0 - e2 / (a2 + t) - z2 / (c2 + t)) / ((a2 + t) * std::sqrt(c2 + t));
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  const double integral = integrator.integrate([&](double s) { return f(lambda + s); }, 1e-14);
  return pi * a2 * b * a * integral;
}

}  // namespace

double LaneEmdenSolution::density(double r) const {
  const double x = r / alpha;
  if (x >= xi1) return 0.0;
  const double n = index_of(gamma);
  if (xi.empty()) return x == 0.0 ? central_density : central_density * std::sin(x) / x;
  const double theta_x = x <= xi.front() ? 1.0 - x * x / 6.0 : table_lookup(*this, x).value;
  return central_density * std::pow(std::max(theta_x, 0.0), n);
}

double LaneEmdenSolution::enclosed_mass(double r) const {
  const double x = std::min(r / alpha, xi1);
  const double scale = 4.0 * pi * central_density * alpha * alpha * alpha;
  if (xi.empty()) return scale * (std::sin(x) - x * std::cos(x));
  if (x <= xi.front()) return scale * x * x * x / 3.0;
  return scale * (-x * x * table_lookup(*this, x).slope);
}

LaneEmdenSolution lane_emden(double K, double gamma, double M) {
  check_gamma(gamma);
  if (!(K > 0.0 && M > 0.0)) throw std::invalid_argument("K and M must be positive");
  if (gamma != 2.0) return lane_emden_numeric(K, gamma, M);
  LaneEmdenSolution s;
  s.K = K;
  s.gamma = gamma;
  s.mass = M;
  s.xi1 = pi;
  s.omega = pi;
  finish(s);
  return s;
}

LaneEmdenSolution lane_emden_numeric(double K, double gamma, double M, double h) {
  check_gamma(gamma);
  if (!(K > 0.0 && M > 0.0 && h > 0.0)) throw std::invalid_argument("K, M and h must be positive");
  const double n = index_of(gamma);
  LaneEmdenSolution s;
  s.K = K;
  s.gamma = gamma;
  s.mass = M;

  double x = h;
  double th = 1.0 - x * x / 6.0 + n * std::pow(x, 4) / 120.0;
  double dth = -x / 3.0 + n * std::pow(x, 3) / 30.0;
  s.xi = {0.0, x};
  s.theta = {1.0, th};
  s.dtheta = {0.0, dth};
  while (th > 0.0) {
    const auto f = [n](double xx, double t, double d) { return theta_second(xx, t, d, n); };
    const double k1t = dth, k1d = f(x, th, dth);
    const double k2t = dth + 0.5 * h * k1d, k2d = f(x + 0.5 * h, th + 0.5 * h * k1t, dth + 0.5 * h * k1d);
    const double k3t = dth + 0.5 * h * k2d, k3d = f(x + 0.5 * h, th + 0.5 * h * k2t, dth + 0.5 * h * k2d);
    const double k4t = dth + h * k3d, k4d = f(x + h, th + h * k3t, dth + h * k3d);
    th += h / 6.0 * (k1t + 2 * k2t + 2 * k3t + k4t);
    dth += h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
    x += h;
    s.xi.push_back(x);
    s.theta.push_back(th);
    s.dtheta.push_back(dth);
    if (x > 1e3) throw std::runtime_error("Lane-Emden integration did not reach the surface");
  }
  // Root of the Hermite interpolant in the last step by bisection.
  const std::size_t k = s.xi.size() - 2;
  double lo = s.xi[k], hi = s.xi[k + 1];
  const auto at = [&](double xx) {
    return hermite(s.xi[k], s.xi[k + 1], s.theta[k], s.theta[k + 1], s.dtheta[k], s.dtheta[k + 1], xx);
  };
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (at(mid).value > 0.0 ? lo : hi) = mid;
  }
  s.xi1 = 0.5 * (lo + hi);
  s.omega = -s.xi1 * s.xi1 * at(s.xi1).slope;
  finish(s);
  return s;
}

DensityProfile lane_emden_profile(double K, double gamma, double M, const RadialGrid& grid) {
  if (grid.ellipticity() != 1.0) throw std::invalid_argument("Lane-Emden profiles need b = 1");
  const auto s = lane_emden(K, gamma, M);
  const auto e = grid.edges();
  const auto vol = grid.volumes();
  std::vector<double> rho(grid.cells());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    rho[i] = std::max(0.0, (s.enclosed_mass(e[i + 1]) - s.enclosed_mass(e[i])) / vol[i]);
  }
  return DensityProfile(grid, std::move(rho));
}

MonteCarloEstimate monte_carlo_potential(const DensityProfile& profile, double eta, double z, std::size_t n_samples,
                                         std::uint64_t seed) {
  if (n_samples < 10000) throw std::invalid_argument("potential estimate needs at least 1e4 samples");
  return sample_support(profile, n_samples, seed, [&](double x, double y, double w, double& v) {
    const double d = std::sqrt((x - eta) * (x - eta) + y * y + (w - z) * (w - z));
    if (d < 1e-12) return false;
    v = density_at_point(profile, x, y, w) / d;
    return true;
  });
}

MonteCarloEstimate monte_carlo_cyl_mass(const DensityProfile& profile, double s, std::size_t n_samples,
                                        std::uint64_t seed) {
  if (!(s >= 0.0)) throw std::invalid_argument("cylindrical radius must be nonnegative");
  return sample_support(profile, n_samples, seed, [&](double x, double y, double w, double& v) {
    v = (x * x + y * y < s * s) ? density_at_point(profile, x, y, w) : 0.0;
    return true;
  });
}

MonteCarloEstimate monte_carlo_rotation_energy(const DensityProfile& profile, const std::function<double(double)>& L,
                                               const std::function<double(double)>& m, std::size_t n_samples,
                                               std::uint64_t seed) {
  return sample_support(profile, n_samples, seed, [&](double x, double y, double w, double& v) {
    const double eta2 = x * x + y * y;
    v = eta2 > 0.0 ? 0.5 * density_at_point(profile, x, y, w) * L(m(std::sqrt(eta2))) / eta2 : 0.0;
    return true;
  });
}

double quadrature_rotation_potential(const std::function<double(double)>& L, const std::function<double(double)>& m,
                                     double eta, double support) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (eta >= support) return L(m(eta)) / (2.0 * eta * eta);
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double body = integrator.integrate([&](double s) { return L(m(s)) / (s * s * s); }, eta, support, 1e-13);
  return body + L(m(support)) / (2.0 * support * support);
}

double uniform_ellipsoid_cyl_mass(double b, double R, double rho, double s) {
  const double total = 4.0 / 3.0 * pi * b * R * R * R * rho;
  if (s >= R) return total;
  return total * (1.0 - std::pow(1.0 - (s / R) * (s / R), 1.5));
}

double homoeoid_factor(double b) {
  if (!(b > 0.0)) throw std::invalid_argument("b must be positive");
  if (b == 1.0) return 1.0;
  if (b > 1.0) {
    const double s = std::sqrt(b * b - 1.0);
    return std::log(b + s) / s;
  }
  const double s = std::sqrt(1.0 - b * b);
  return std::acos(b) / s;
}

std::vector<double> homoeoid_shell_potential(const DensityProfile& profile) {
  const auto& grid = profile.grid();
  const double b = grid.ellipticity();
  const double g = homoeoid_factor(b);
  const auto e = grid.edges();
  const auto r = grid.midpoints();
  const std::size_t n = profile.size();
  std::vector<double> out(n);
  double inner = 0.0;  // mass of cells below i
  std::vector<double> outer(n + 1, 0.0);  // int_{e_k}^R rho t dt
  for (std::size_t k = n; k-- > 0;) outer[k] = outer[k + 1] + profile[k] * 0.5 * (e[k + 1] * e[k + 1] - e[k] * e[k]);
  for (std::size_t i = 0; i < n; ++i) {
    const double below = inner + profile[i] * 4.0 / 3.0 * pi * b * (r[i] * r[i] * r[i] - e[i] * e[i] * e[i]);
    const double above = outer[i + 1] + profile[i] * 0.5 * (e[i + 1] * e[i + 1] - r[i] * r[i]);
    out[i] = g * (below / r[i] + 4.0 * pi * b * above);
    inner += profile[i] * 4.0 / 3.0 * pi * b * (e[i + 1] * e[i + 1] * e[i + 1] - e[i] * e[i] * e[i]);
  }
  return out;
}

double ellipsoid_potential(const DensityProfile& profile, double eta, double z) {
  const auto& grid = profile.grid();
  const double b = grid.ellipticity();
  const auto e = grid.edges();
  double sum = 0.0;
  double previous = 0.0;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    const double next = solid_ellipsoid_potential(e[k + 1], b, eta, z);
    if (profile[k] != 0.0) sum += profile[k] * (next - previous);
    previous = next;
  }
  return sum;
}

double uniform_ellipsoid_self_energy(double b, double rho, double R) {
  return 16.0 / 15.0 * pi * pi * b * b * homoeoid_factor(b) * rho * rho * std::pow(R, 5);
}

}  // namespace rotstar
