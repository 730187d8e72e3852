#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "rotstar/energy.hpp"
#include "rotstar/solver.hpp"

namespace rotstar {
namespace {

constexpr double pi = std::numbers::pi;

const SolveReport& lane_emden_solution() {
  static const SolveReport report = solve(ModelSpec{}, build_grid(1.0, 3.0, 400, 8), SolverOptions{});
  return report;
}

std::vector<double> bump(const RadialGrid& grid, double center, double width) {
  std::vector<double> s(grid.cells(), 0.0);
  for (std::size_t i = 0; i < grid.cells(); ++i) {
    const double x = (grid.midpoints()[i] - center) / width;
    if (std::abs(x) < 1.0) s[i] = (1.0 - x * x) * (1.0 - x * x);
  }
  return s;
}

TEST(InternalEnergy, IsentropicReducesToIntegralOfA) {
  const auto grid = build_grid(1.4, 2.0, 30, 8);
  std::vector<double> rho(30, 0.0);
  for (std::size_t i = 0; i < 20; ++i) rho[i] = 1.0 + 0.05 * i;
  const DensityProfile p(grid, rho);
  double expected = 0.0;
  for (std::size_t i = 0; i < 30; ++i) expected += rho[i] * rho[i] * grid.volumes()[i];
  EXPECT_NEAR(internal_energy(p, ModelSpec{}) / expected, 1.0, 1e-14);
  EXPECT_EQ(internal_energy(DensityProfile::zero(grid), ModelSpec{}), 0.0);
}

TEST(InternalEnergy, NonIsentropicUniformBallQuadrature) {
  const double b = 1.0, rho = 1.0;
  const auto grid = build_grid(b, 2.0, 40, 8);
  const auto ball = DensityProfile::uniform_ball(grid, 1.0, rho);
  ModelSpec spec;
  spec.entropy = EntropyProfile::linear(2.0 / (9.0 * spec.total_mass));
  const double c = 2.0 / (9.0 * spec.total_mass);
  const auto integrand = [&](double r) {
    const double n = 4.0 / 3.0 * pi * b * rho * r * r * r;
    return rho * rho * std::exp(-c * n) * 4.0 * pi * b * r * r;
  };
  const double ref = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, 15, 1e-14);
  EXPECT_NEAR(internal_energy(ball, spec) / ref, 1.0, 1e-8);
}

TEST(TotalEnergy, UniformBall) {
  const auto grid = build_grid(1.0, 2.0, 40, 8);
  const auto ball = DensityProfile::uniform_ball(grid, 1.0, 1.0);
  const auto e = total_energy(ball, ModelSpec{});
  EXPECT_NEAR(e.internal, 4.0 * pi / 3.0, 1e-12);
  EXPECT_NEAR(e.gravitational / (-16.0 / 15.0 * pi * pi), 1.0, 1e-12);
  EXPECT_EQ(e.rotational, 0.0);
  EXPECT_DOUBLE_EQ(e.total, e.internal + e.rotational + e.gravitational);
  const auto half = total_energy(DensityProfile::uniform_ball(grid, 1.0, 0.5), ModelSpec{});
  EXPECT_NEAR(half.internal / e.internal, 0.25, 1e-14);
  EXPECT_NEAR(half.gravitational / e.gravitational, 0.25, 1e-14);
}

TEST(TotalEnergy, BreakdownSumsWithRotation) {
  const auto grid = build_grid(1.5, 2.0, 24, 8);
  const auto ball = DensityProfile::uniform_ball(grid, 1.0, 1.0);
  ModelSpec spec;
  spec.b = 1.5;
  spec.angmom = AngularMomentumProfile::power(0.1, 4.0 / 3.0);
  spec.entropy = EntropyProfile::linear(0.2);
  const auto e = total_energy(ball, spec);
  EXPECT_GT(e.rotational, 0.0);
  EXPECT_NEAR(e.total, e.internal + e.rotational + e.gravitational, 1e-14 * std::abs(e.gravitational));
}

TEST(PotentialFunction, IsentropicHasNoTail) {
  const auto grid = build_grid(1.0, 2.0, 20, 8);
  const auto ball = DensityProfile::uniform_ball(grid, 1.0, 1.0);
  ModelSpec spec;
  const auto g = potential_function(ball, spec, compute_fields(ball, spec));
  for (double q : g.entropy_tail) EXPECT_EQ(q, 0.0);
}

TEST(PotentialFunction, ZeroProfile) {
  const auto grid = build_grid(1.0, 2.0, 20, 8);
  const auto zero = DensityProfile::zero(grid);
  ModelSpec spec;
  const auto g = potential_function(zero, spec, compute_fields(zero, spec));
  for (double v : g.values) EXPECT_EQ(v, 0.0);
}

TEST(PotentialFunction, LaneEmdenIsFlat) {
  const auto& report = lane_emden_solution();
  ASSERT_TRUE(report.converged);
  const double lambda = -std::sqrt(2.0 / pi);
  const double floor = 1e-12 * report.profile.max_density();
  for (std::size_t i = 0; i < report.profile.size(); ++i) {
    if (report.profile[i] > floor) EXPECT_NEAR(report.potential.values[i], lambda, 1e-3);
  }
}

TEST(DirectionalDerivative, ZeroDirection) {
  const auto grid = build_grid(1.0, 2.0, 20, 8);
  const auto ball = DensityProfile::uniform_ball(grid, 1.0, 1.0);
  const std::vector<double> sigma(20, 0.0), t{1e-4};
  const auto r = directional_derivative_check(ball, ModelSpec{}, sigma, t);
  EXPECT_EQ(r.samples[0].finite_difference, 0.0);
  EXPECT_EQ(r.samples[0].predicted, 0.0);
}

TEST(DirectionalDerivative, ShellBumpFirstOrder) {
  const auto grid = build_grid(1.0, 2.0, 40, 8);
  const auto ball = DensityProfile::uniform_ball(grid, 1.0, 1.0);
  ModelSpec spec;
  spec.entropy = EntropyProfile::linear(0.3);
  spec.angmom = AngularMomentumProfile::power(0.05, 4.0 / 3.0);
  const auto sigma = bump(grid, 0.5, 0.2);
  const std::vector<double> t{1e-3, 1e-4, 1e-5};
  const auto r = directional_derivative_check(ball, spec, sigma, t);
  EXPECT_LE(r.samples[1].gap, 1e-3);
  EXPECT_NEAR(r.samples[0].gap / r.samples[1].gap, 10.0, 1.0);
  EXPECT_NEAR(r.samples[1].gap / r.samples[2].gap, 10.0, 1.0);
}

TEST(DirectionalDerivative, RejectsInadmissibleDirections) {
  const auto grid = build_grid(1.0, 2.0, 40, 8);
  const auto ball = DensityProfile::uniform_ball(grid, 1.0, 1.0);
  const std::vector<double> t{1e-4};
  auto outside = bump(grid, 1.5, 0.2);
  for (double& v : outside) v = -v;
  EXPECT_THROW(directional_derivative_check(ball, ModelSpec{}, outside, t), std::invalid_argument);
  std::vector<double> axis(40, 0.0);
  axis[0] = 1.0;
  EXPECT_THROW(directional_derivative_check(ball, ModelSpec{}, axis, t, 0.1), std::invalid_argument);
}

TEST(ElResidual, LaneEmdenCertificate) {
  const auto& report = lane_emden_solution();
  const double tol = 1e-6 * std::abs(report.lambda);
  EXPECT_LE(report.residual.interior, tol);
  EXPECT_LE(report.residual.exterior, tol);
  const auto direct = el_residual(report.profile, ModelSpec{}, report.lambda);
  EXPECT_NEAR(direct.interior, report.residual.interior, 1e-12);
}

TEST(ElResidual, ShiftedMultiplier) {
  const auto& report = lane_emden_solution();
  const double delta = 1e-3;
  const auto shifted = el_residual(report.profile, report.potential, report.lambda + delta);
  EXPECT_NEAR(shifted.interior, delta, 2.0 * report.residual.interior + 1e-14);
}

TEST(ElResidual, FarFromEquilibrium) {
  const auto grid = build_grid(1.0, 2.0, 40, 8);
  const auto ball = DensityProfile::uniform_ball(grid, 1.0, 1.0);
  const auto r = el_residual(ball, ModelSpec{}, 0.0);
  EXPECT_GT(r.interior, 0.1);
}

TEST(SteadyResidual, IsentropicRefinement) {
  std::vector<double> values, averaged;
  for (std::size_t n : {100u, 200u, 400u}) {
    const auto report = solve(ModelSpec{}, build_grid(1.0, 3.0, n, 8), SolverOptions{});
    ASSERT_TRUE(report.converged);
    const auto s = steady_residual(report.profile, ModelSpec{});
    values.push_back(s.pointwise);
    averaged.push_back(s.shell_averaged);
    EXPECT_LE(s.shell_averaged, s.pointwise);
  }
  EXPECT_GE(values[0] / values[1], 1.5);
  EXPECT_GE(values[1] / values[2], 1.5);
  EXPECT_GE(averaged[0] / averaged[1], 1.5);
  EXPECT_GE(averaged[1] / averaged[2], 1.5);
}

TEST(SteadyResidual, UniformDensityDoesNotBalance) {
  const auto grid = build_grid(1.0, 2.0, 40, 8);
  const auto ball = DensityProfile::uniform_ball(grid, 1.5, 1.0);
  EXPECT_GT(steady_residual(ball, ModelSpec{}).pointwise, 0.1);
}

TEST(SteadyResidual, NeedsSupport) {
  const auto grid = build_grid(1.0, 2.0, 40, 8);
  EXPECT_THROW(steady_residual(DensityProfile::uniform_ball(grid, 0.1, 1.0), ModelSpec{}), std::invalid_argument);
}

}  // namespace
}  // namespace rotstar
