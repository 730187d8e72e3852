#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rotstar/fields.hpp"
#include "rotstar/oracles.hpp"

namespace rotstar {
namespace {

constexpr double pi = std::numbers::pi;

DensityProfile random_profile(const RadialGrid& grid, std::mt19937_64& rng, std::size_t support) {
  std::uniform_real_distribution<double> U(0.1, 2.0);
  std::vector<double> rho(grid.cells(), 0.0);
  for (std::size_t i = 0; i < support; ++i) rho[i] = U(rng);
  return DensityProfile(grid, rho);
}

TEST(DensityProfile, RejectsNegative) {
  const auto grid = build_grid(1.0, 1.0, 8, 4);
  EXPECT_THROW(DensityProfile(grid, {1, 1, 1, -1, 0, 0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(DensityProfile(grid, {1, 1}), std::invalid_argument);
}

TEST(EllipsoidalMass, UniformBall) {
  for (double b : {1.0, 2.0}) {
    const auto grid = build_grid(b, 2.0, 40, 8);
    const auto ball = DensityProfile::uniform_ball(grid, 1.0, 0.8);
    const auto n = ellipsoidal_mass(ball);
    for (std::size_t k = 0; k <= 20; ++k) {
      const double s = grid.edges()[k];
      EXPECT_NEAR(n[k], 4.0 / 3.0 * pi * b * s * s * s * 0.8, 1e-13);
    }
    EXPECT_NEAR(ellipsoidal_mass_at(ball, 0.537), 4.0 / 3.0 * pi * b * std::pow(0.537, 3) * 0.8, 1e-13);
  }
  const auto grid = build_grid(1.0, 2.0, 40, 8);
  EXPECT_NEAR(DensityProfile::uniform_ball(grid, 1.0, 1.0).total_mass(), 4.0 * pi / 3.0, 1e-13);
  for (double v : ellipsoidal_mass(DensityProfile::zero(grid))) EXPECT_EQ(v, 0.0);
}

TEST(CylindricalMass, UniformBallClosedForm) {
  const auto grid = build_grid(1.0, 2.0, 40, 8);
  const auto ball = DensityProfile::uniform_ball(grid, 1.0, 1.0);
  const double expected = 4.0 * pi / 3.0 * (1.0 - std::pow(1.0 - 0.36, 1.5));
  EXPECT_NEAR(cylindrical_mass(ball, 0.6), expected, 1e-13);
  EXPECT_NEAR(expected / (4.0 * pi / 3.0), 0.488, 1e-12);
  EXPECT_EQ(cylindrical_mass(ball, 0.0), 0.0);
  EXPECT_NEAR(cylindrical_mass(ball, 1.0), ball.total_mass(), 1e-13);
  EXPECT_NEAR(cylindrical_mass(ball, 5.0), ball.total_mass(), 1e-13);
}

TEST(CylindricalMass, EllipsoidAndMonteCarlo) {
  const auto grid = build_grid(2.0, 2.0, 40, 8);
  const auto body = DensityProfile::uniform_ball(grid, 1.0, 1.0);
  for (double s : {0.1, 0.6, 0.95}) {
    EXPECT_NEAR(cylindrical_mass(body, s), uniform_ellipsoid_cyl_mass(2.0, 1.0, 1.0, s), 1e-13);
  }
  const auto mc = monte_carlo_cyl_mass(body, 0.6, 200000, 3);
  EXPECT_LE(std::abs(mc.value - cylindrical_mass(body, 0.6)), 3.0 * mc.std_error);
}

TEST(CylindricalMass, MonotoneAndDerivative) {
  std::mt19937_64 rng(5);
  const auto grid = build_grid(1.3, 2.0, 30, 8);
  const auto p = random_profile(grid, rng, 25);
  const CylindricalMass m(p);
  double prev = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double s = 0.01 * k;
    EXPECT_GE(m(s), prev);
    prev = m(s);
    const double h = 1e-6;
    const double offset = std::fmod(s, grid.spacing());
    if (std::min(offset, grid.spacing() - offset) > 1e-3 && s < 1.9) {
      EXPECT_NEAR(m.derivative(s), (m(s + h) - m(s - h)) / (2 * h), 1e-5 * std::max(1.0, m.derivative(s)));
    }
  }
}

TEST(RotationPotential, BeyondSupportAndZero) {
  const auto grid = build_grid(1.0, 2.0, 40, 8);
  const auto ball = DensityProfile::uniform_ball(grid, 1.0, 1.0);
  const auto L = AngularMomentumProfile::power(1.0, 4.0 / 3.0);
  for (double eta : {1.0, 1.3, 1.9}) {
    EXPECT_NEAR(rotation_potential(ball, L, eta), std::pow(ball.total_mass(), 4.0 / 3.0) / (2 * eta * eta), 1e-13);
  }
  EXPECT_EQ(rotation_potential(ball, AngularMomentumProfile::none(), 0.5), 0.0);
  EXPECT_EQ(rotation_energy(ball, AngularMomentumProfile::none()), 0.0);
  EXPECT_THROW(rotation_potential(ball, L, 0.0), std::invalid_argument);
}

TEST(RotationPotential, MatchesQuadratureOracle) {
  const auto grid = build_grid(1.0, 2.0, 40, 8);
  const auto ball = DensityProfile::uniform_ball(grid, 1.0, 1.0);
  const auto L = AngularMomentumProfile::power(1.0, 4.0 / 3.0);
  const auto Lf = [&](double m) { return L(m); };
  const auto mf = [](double s) { return uniform_ellipsoid_cyl_mass(1.0, 1.0, 1.0, s); };
  for (double eta : {0.05, 0.5, 0.77}) {
    const double ref = quadrature_rotation_potential(Lf, mf, eta, 1.0);
    EXPECT_NEAR(rotation_potential(ball, L, eta) / ref, 1.0, 1e-6) << eta;
  }
}

TEST(RotationEnergy, MonteCarloAndLinearity) {
  const auto grid = build_grid(1.0, 2.0, 40, 8);
  const auto ball = DensityProfile::uniform_ball(grid, 1.0, 1.0);
  const auto L = AngularMomentumProfile::power(1.0, 4.0 / 3.0);
  const double e = rotation_energy(ball, L);
  const auto mf = [](double s) { return uniform_ellipsoid_cyl_mass(1.0, 1.0, 1.0, s); };
  const auto mc = monte_carlo_rotation_energy(ball, [&](double m) { return L(m); }, mf, 1000000, 17);
  EXPECT_LE(std::abs(mc.value - e), 3.0 * mc.std_error);
  EXPECT_LE(std::abs(mc.value - e) / e, 1e-3);
  EXPECT_NEAR(rotation_energy(ball, AngularMomentumProfile::power(2.0, 4.0 / 3.0)) / e, 2.0, 1e-13);
}

TEST(RotationIntegrals, CellAverageBracketsPointValues) {
  const auto grid = build_grid(1.0, 2.0, 40, 8);
  const auto ball = DensityProfile::uniform_ball(grid, 1.0, 1.0);
  const RotationIntegrals rot(ball, AngularMomentumProfile::power(1.0, 4.0 / 3.0));
  const auto avg = rot.cell_average_potential();
  for (std::size_t i = 1; i < grid.cells(); ++i) {
    EXPECT_TRUE(std::isfinite(avg[i]));
    EXPECT_GT(avg[i - 1], 0.0);
  }
}

TEST(Rescale, IdentityAtOne) {
  std::mt19937_64 rng(9);
  const auto grid = build_grid(1.4, 2.0, 30, 8);
  const auto p = random_profile(grid, rng, 20);
  const auto q = rescale_profile(p, 1.0);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i], q[i]);
  EXPECT_EQ(q.grid().outer_radius(), p.grid().outer_radius());
}

TEST(Rescale, MassIdentities) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 4; ++trial) {
    const auto grid = build_grid(0.6 + 0.5 * trial, 2.0, 30, 8);
    const auto p = random_profile(grid, rng, 25);
    for (double a : {0.3, 0.75}) {
      const auto q = rescale_profile(p, a);
      const CylindricalMass mp(p), mq(q);
      for (double eta : {0.07, 0.4, 1.1, 1.9}) {
        EXPECT_NEAR(mp(eta) / (a * a * a * mq(eta / a)), 1.0, 1e-10);
        EXPECT_NEAR(ellipsoidal_mass_at(p, eta) / (a * a * a * ellipsoidal_mass_at(q, eta / a)), 1.0, 1e-10);
      }
    }
  }
}

}  // namespace
}  // namespace rotstar
