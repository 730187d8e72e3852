#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rotstar/oracles.hpp"
#include "rotstar/solver.hpp"

namespace rotstar {
namespace {

constexpr double pi = std::numbers::pi;

FieldSet flat_fields(std::size_t n) {
  FieldSet f;
  f.entropy_tail.assign(n, 0.0);
  f.rotation.assign(n, 0.0);
  f.gravity.assign(n, 0.0);
  f.mean_T.assign(n, 1.0);
  return f;
}

double mass_of(const std::vector<double>& rho, const RadialGrid& grid) {
  return DensityProfile(grid, rho).total_mass();
}

TEST(SolveLambda, FlatPotentialsClosedForm) {
  const double b = 1.3, R = 2.0, M = 1.7;
  const auto grid = build_grid(b, R, 20, 8);
  const auto fields = flat_fields(20);
  ModelSpec spec;
  const double lambda = solve_lambda(fields, spec, grid, M);
  EXPECT_NEAR(lambda, 2.0 * M / (4.0 / 3.0 * pi * b * R * R * R), 1e-12);
  for (double rho : candidate_density(fields, spec, lambda)) EXPECT_NEAR(rho, lambda / 2.0, 1e-15);
}

TEST(SolveLambda, ZeroMass) {
  const auto grid = build_grid(1.0, 2.0, 20, 8);
  auto fields = flat_fields(20);
  for (std::size_t i = 0; i < 20; ++i) fields.gravity[i] = 1.0 + 0.1 * i;
  ModelSpec spec;
  const double lambda = solve_lambda(fields, spec, grid, 0.0);
  EXPECT_NEAR(lambda, -2.9, 1e-15);
  EXPECT_EQ(mass_of(candidate_density(fields, spec, lambda), grid), 0.0);
}

TEST(SolveLambda, BracketsTarget) {
  const auto grid = build_grid(1.0, 2.0, 30, 8);
  const auto ball = DensityProfile::uniform_ball(grid, 1.0, 1.0);
  ModelSpec spec;
  spec.entropy = EntropyProfile::linear(0.4);
  const auto fields = compute_fields(ball, spec);
  const double lambda = solve_lambda(fields, spec, grid, 1.0);
  const double tol = 1e-8 * std::abs(lambda);
  EXPECT_LE(mass_of(candidate_density(fields, spec, lambda - tol), grid), 1.0);
  EXPECT_GE(mass_of(candidate_density(fields, spec, lambda + tol), grid), 1.0);
  EXPECT_NEAR(mass_of(candidate_density(fields, spec, lambda), grid), 1.0, 1e-10);
}

class SolverFixture : public ::testing::Test {
 protected:
  static const SolveReport& lane_emden() {
    static const SolveReport report = solve(ModelSpec{}, build_grid(1.0, 3.0, 400, 8), SolverOptions{});
    return report;
  }
};

TEST_F(SolverFixture, LaneEmden) {
  const auto& r = lane_emden();
  ASSERT_TRUE(r.converged);
  const double dr = 3.0 / 400.0;
  EXPECT_NEAR(r.lambda / -std::sqrt(2.0 / pi), 1.0, 1e-3);
  EXPECT_NEAR(r.profile[0] / (1.0 / std::sqrt(2.0 * pi)), 1.0, 1e-3);
  EXPECT_NEAR(r.support_radius, std::sqrt(pi / 2.0), 2.0 * dr);
  EXPECT_LE(r.mass_error, 1e-10);
  EXPECT_FALSE(r.truncation_warning);
  EXPECT_EQ(support_radius(r.profile, 1e-12 * r.profile.max_density()), r.support_radius);
  // Cells leaving the support drain geometrically under damping.
  EXPECT_GE(support_radius(r.profile, 0.0), r.support_radius);
}

TEST_F(SolverFixture, EnergyDecreasesAfterStart) {
  const auto& trace = lane_emden().energy_trace;
  ASSERT_GT(trace.size(), 6u);
  for (std::size_t k = 6; k < trace.size(); ++k) EXPECT_LE(trace[k], trace[k - 1] + 1e-13);
}

TEST(Scf, FixedPointIdempotent) {
  const auto grid = build_grid(1.0, 3.0, 200, 8);
  const EnergyModel model(ModelSpec{}, grid);
  SolverOptions opts;
  opts.residual_tolerance = 1e-13;
  const auto r = solve(model, opts);
  ASSERT_TRUE(r.converged);
  const ScfState state{r.profile, r.lambda, r.residual, r.energy.total};
  const auto next = scf_step(model, state, opts);
  for (std::size_t i = 0; i < r.profile.size(); ++i) {
    EXPECT_NEAR(next.profile[i], r.profile[i], 1e-10 * r.profile.max_density());
  }
  EXPECT_NEAR(next.lambda / r.lambda, 1.0, 1e-10);
}

TEST(Scf, ZeroDampingFreezes) {
  const auto grid = build_grid(1.0, 3.0, 60, 8);
  const EnergyModel model(ModelSpec{}, grid);
  const auto ball = DensityProfile::uniform_ball(grid, 1.0, 3.0 / (4.0 * pi));
  SolverOptions opts;
  opts.damping = 0.0;
  const auto next = scf_step(model, {ball, 0.0, {}, 0.0}, opts);
  for (std::size_t i = 0; i < grid.cells(); ++i) EXPECT_EQ(next.profile[i], ball[i]);
}

TEST(Scf, ResidualContractsEarly) {
  const auto grid = build_grid(1.0, 3.0, 100, 8);
  const EnergyModel model(ModelSpec{}, grid);
  // Uniform ball inside the equilibrium support; a larger ball keeps the
  // sup residual high until the outer cells drain.
  ScfState state{DensityProfile::uniform_ball(grid, 1.0, 3.0 / (4.0 * pi)), 0.0, {}, 0.0};
  std::vector<double> res;
  for (int k = 0; k < 10; ++k) {
    state = scf_step(model, state, SolverOptions{});
    res.push_back(state.residual.interior);
  }
  for (std::size_t k = 1; k < res.size(); ++k) EXPECT_LT(res[k], res[k - 1]);
}

TEST(Solve, ZeroMass) {
  ModelSpec spec;
  spec.total_mass = 0.0;
  const auto r = solve(spec, build_grid(1.0, 3.0, 50, 8), SolverOptions{});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.profile.total_mass(), 0.0);
  EXPECT_EQ(r.energy.total, 0.0);
  EXPECT_EQ(r.support_radius, 0.0);
}

TEST(Solve, MassConstraintAndNonlinearity) {
  ModelSpec soft;
  soft.eos = EquationOfState::polytrope(1.0, 5.0 / 3.0);
  const auto grid = build_grid(1.0, 5.0, 200, 8);
  const auto r1 = solve(soft, grid, SolverOptions{});
  soft.total_mass = 2.0;
  const auto r2 = solve(soft, grid, SolverOptions{});
  ASSERT_TRUE(r1.converged);
  ASSERT_TRUE(r2.converged);
  EXPECT_LE(r2.mass_error, 1e-10);
  // R scales as M^{-1/3} for n = 3/2, so the M = 2 star is more compact.
  EXPECT_LT(r2.support_radius, r1.support_radius - 0.05);
  const auto le = lane_emden(1.0, 5.0 / 3.0, 2.0);
  EXPECT_NEAR(r2.support_radius, le.surface, 2.0 * grid.spacing());
  EXPECT_NEAR(r2.lambda / le.multiplier(), 1.0, 5e-3);
}

TEST(Solve, LinearInMassForGammaTwo) {
  ModelSpec spec;
  const auto grid = build_grid(1.0, 3.0, 200, 8);
  const auto r1 = solve(spec, grid, SolverOptions{});
  spec.total_mass = 2.0;
  const auto r2 = solve(spec, grid, SolverOptions{});
  EXPECT_LE(r2.mass_error, 1e-10);
  EXPECT_NEAR(r2.lambda / r1.lambda, 2.0, 1e-7);
  EXPECT_EQ(r2.support_radius, r1.support_radius);
}

TEST(Solve, SlowRotationLowersEnergy) {
  const auto grid = build_grid(1.0, 3.0, 120, 8);
  ModelSpec still;
  const auto r0 = solve(still, grid, SolverOptions{});
  ModelSpec spinning;
  spinning.angmom = AngularMomentumProfile::power(0.05, 4.0 / 3.0);
  const auto r1 = solve(spinning, grid, SolverOptions{});
  ASSERT_TRUE(r1.converged);
  const auto e0 = total_energy(r0.profile, spinning);
  EXPECT_LT(r1.energy.total, e0.total);
  EXPECT_GT(r1.energy.rotational, 0.0);
  EXPECT_LT(r1.support_radius, 0.9 * grid.outer_radius());
  EXPECT_LE(r1.residual.interior, 1e-6 * std::abs(r1.lambda));
}

TEST(Solve, TruncationWarning) {
  const auto r = solve(ModelSpec{}, build_grid(1.0, 1.2, 80, 8), SolverOptions{});
  EXPECT_TRUE(r.truncation_warning);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(SupportRadius, Cases) {
  const auto grid = build_grid(1.0, 2.0, 40, 8);
  EXPECT_NEAR(support_radius(DensityProfile::uniform_ball(grid, 0.5, 1.0), 0.0), 0.5, grid.spacing());
  EXPECT_EQ(support_radius(DensityProfile::zero(grid), 0.0), 0.0);
}

TEST(ScanPoints, LogUniform) {
  const auto b = scan_points(1.5, 5);
  ASSERT_EQ(b.size(), 5u);
  EXPECT_NEAR(b.front(), 1.0 / 1.5, 1e-15);
  EXPECT_NEAR(b[2], 1.0, 1e-15);
  EXPECT_NEAR(b.back(), 1.5, 1e-15);
  EXPECT_NEAR(b[1] * b[3], 1.0, 1e-15);
  EXPECT_THROW(scan_points(1.0, 5), std::invalid_argument);
}

TEST(ScanB, ArgminAndRefinement) {
  const auto grid = build_grid(1.0, 3.0, 40, 8);
  ModelSpec spec;
  const auto coarse = scan_b(spec, 2.0, 5, grid, SolverOptions{});
  ASSERT_TRUE(coarse.argmin.has_value());
  EXPECT_EQ(*coarse.argmin, 2u);
  for (const auto& e : coarse.entries) EXPECT_TRUE(e.converged);
  const auto fine = scan_b(spec, 2.0, 9, grid, SolverOptions{});
  EXPECT_EQ(*fine.argmin, 4u);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_NEAR(fine.entries[2 * k].b, coarse.entries[k].b, 1e-15);
    EXPECT_NEAR(fine.entries[2 * k].energy / coarse.entries[k].energy, 1.0, 1e-8);
  }
}

}  // namespace
}  // namespace rotstar
