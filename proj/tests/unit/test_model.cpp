#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rotstar/model.hpp"

namespace rotstar {
namespace {

TEST(EquationOfState, PolytropeClosedForms) {
  const auto eos = EquationOfState::polytrope(1.0, 2.0);
  EXPECT_EQ(eos.energy_density(0.0), 0.0);
  EXPECT_DOUBLE_EQ(eos.energy_density(2.0), 4.0);
  EXPECT_DOUBLE_EQ(eos.marginal_energy(1.5), 3.0);
  EXPECT_EQ(eos.marginal_energy(0.0), 0.0);
  EXPECT_DOUBLE_EQ(eos.marginal_energy(2.0) - eos.energy_density(2.0) / 2.0, 2.0);
  EXPECT_DOUBLE_EQ(eos.density_from_marginal(3.0), 1.5);
  EXPECT_EQ(eos.density_from_marginal(0.0), 0.0);
}

TEST(EquationOfState, QuadratureMatchesClosedForm) {
  const auto eos = EquationOfState::polytrope(1.0, 5.0 / 3.0);
  EXPECT_NEAR(eos.energy_density(1.0), 1.5, 1e-14);
  for (double s : {1e-3, 0.5, 1.0, 7.0}) {
    EXPECT_NEAR(energy_density_by_quadrature(eos, s) / eos.energy_density(s), 1.0, 1e-10) << s;
  }
}

TEST(EquationOfState, MarginalRoundTrip) {
  for (double gamma : {1.5, 5.0 / 3.0, 2.0, 3.0}) {
    const auto eos = EquationOfState::polytrope(0.7, gamma);
    for (double s : {1e-6, 1.0, 10.0}) {
      EXPECT_NEAR(eos.density_from_marginal(eos.marginal_energy(s)) / s, 1.0, 1e-10) << gamma << " " << s;
    }
  }
}

TEST(EquationOfState, ConvexityAndIdentity) {
  const auto eos = EquationOfState::polytrope(1.3, 1.8);
  double prev = 0.0;
  for (int k = -20; k <= 20; ++k) {
    const double s = std::pow(10.0, 0.2 * k);
    const double a = eos.energy_density(s), ap = eos.marginal_energy(s);
    EXPECT_GT(ap, prev);
    prev = ap;
    EXPECT_NEAR((ap - a / s) / (eos.pressure(s) / s), 1.0, 1e-10);
  }
}

TEST(EquationOfState, TabulatedMatchesQuadrature) {
  std::vector<std::pair<double, double>> table;
  for (int k = 1; k <= 40; ++k) {
    const double s = 0.1 * k;
    table.emplace_back(s, s * s);
  }
  const auto eos = EquationOfState::tabulated(table, 1.5);
  EXPECT_EQ(eos.energy_density(0.0), 0.0);
  for (double s : {0.05, 0.3, 1.234, 3.9}) {
    EXPECT_NEAR(energy_density_by_quadrature(eos, s) / eos.energy_density(s), 1.0, 1e-9) << s;
    EXPECT_NEAR(eos.density_from_marginal(eos.marginal_energy(s)) / s, 1.0, 1e-10);
  }
}

TEST(EquationOfState, RejectsNonMonotoneTable) {
  EXPECT_THROW(EquationOfState::tabulated({{0.1, 0.2}, {0.2, 0.1}, {0.3, 0.4}}), std::invalid_argument);
  EXPECT_THROW(EquationOfState::polytrope(-1.0, 2.0), std::invalid_argument);
}

TEST(EntropyProfile, LinearBasics) {
  const auto S = EntropyProfile::linear(2.0 / 3.0);
  EXPECT_EQ(S.entropy(0.0), 0.0);
  EXPECT_EQ(S.temperature(0.0), 1.0);
  EXPECT_NEAR(S.entropy_slope(0.4), -2.0 / 3.0, 1e-15);
  EXPECT_NEAR(S.mean_temperature(0.2, 0.2), S.temperature(0.2), 1e-15);
  // Mean of exp(-c n) over [0, 1].
  const double c = 2.0 / 3.0;
  EXPECT_NEAR(S.mean_temperature(0.0, 1.0), (1.0 - std::exp(-c)) / c, 1e-14);
  EXPECT_NEAR(S.vacuum_margin(2.0), 0.2, 1e-15);
}

TEST(Conditions, PowerAngularMomentumEqualityCase) {
  ModelSpec spec;
  spec.angmom = AngularMomentumProfile::power(1.0, 4.0 / 3.0);
  const auto report = check_conditions(spec);
  EXPECT_TRUE(report["A3"].pass);
  EXPECT_TRUE(report["A4"].pass);
  EXPECT_TRUE(angular_momentum_scaling_holds(spec.angmom, 0.5, 1.0));
}

TEST(Conditions, QuadraticAngularMomentumFails) {
  ModelSpec spec;
  spec.angmom = AngularMomentumProfile::power(1.0, 2.0);
  const auto report = check_conditions(spec);
  EXPECT_FALSE(report["A4"].pass);
  ASSERT_TRUE(report["A4"].counterexample.has_value());
  const auto& c = *report["A4"].counterexample;
  EXPECT_LT(c.lhs, c.rhs);
  EXPECT_FALSE(angular_momentum_scaling_holds(spec.angmom, 0.5, 1.0));
  // 0.25 against 0.5^{4/3}.
  EXPECT_LT(std::pow(0.5, 2.0), std::pow(0.5, 4.0 / 3.0));
  EXPECT_FALSE(report.all_pass());
}

TEST(Conditions, RemarkBoundEntropyPasses) {
  ModelSpec spec;
  spec.angmom = AngularMomentumProfile::power(1.0, 4.0 / 3.0);
  spec.entropy = EntropyProfile::linear(2.0 / 3.0);
  const auto report = check_conditions(spec);
  EXPECT_TRUE(report["A5"].pass);
  EXPECT_TRUE(report["A6"].pass);
  EXPECT_TRUE(report["A7"].pass);
  EXPECT_TRUE(report.remark_sufficiency.pass);
  EXPECT_TRUE(report.all_pass());
  EXPECT_LE(report.T1, report.T0);
}

TEST(Conditions, IncreasingEntropyFailsA6A7) {
  ModelSpec spec;
  spec.entropy = EntropyProfile::linear(-2.0);
  const auto report = check_conditions(spec);
  EXPECT_FALSE(report["A6"].pass);
  EXPECT_FALSE(report["A7"].pass);
  EXPECT_FALSE(report.remark_sufficiency.pass);
  const auto& c = *report["A6"].counterexample;
  EXPECT_FALSE(entropy_scaling_holds(spec.entropy, spec.total_mass, c.a, c.x));
}

TEST(Conditions, SteepDecreasingEntropyFailsA6) {
  ModelSpec spec;
  spec.entropy = EntropyProfile::linear(5.0);
  const auto report = check_conditions(spec);
  EXPECT_FALSE(report["A6"].pass);
  EXPECT_TRUE(report["A7"].pass);
}

TEST(Conditions, SoftPolytropeFailsA1) {
  ModelSpec spec;
  spec.eos = EquationOfState::polytrope(1.0, 1.25);
  EXPECT_FALSE(check_conditions(spec)["A1"].pass);
}

TEST(Conditions, DeclaredGammaBarChecked) {
  ModelSpec spec;
  spec.eos = EquationOfState::polytrope(1.0, 2.0, 1.5);
  EXPECT_FALSE(check_conditions(spec)["A2"].pass);
  spec.eos = EquationOfState::polytrope(1.0, 2.0, 3.0);
  EXPECT_TRUE(check_conditions(spec)["A2"].pass);
}

TEST(Conditions, RemarkSufficiencyOnRandomProfiles) {
  std::mt19937_64 rng(7);
  const double M = 1.3;
  const double bound = 2.0 / (3.0 * M);
  std::uniform_real_distribution<double> slope(-bound, bound);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::pair<double, double>> table{{0.0, 0.0}};
    const int pieces = 12;
    for (int k = 1; k <= pieces; ++k) {
      const double n0 = M * (k - 1) / pieces, n1 = M * k / pieces;
      table.emplace_back(n1, table.back().second + slope(rng) * (n1 - n0));
    }
    ModelSpec spec;
    spec.total_mass = M;
    spec.entropy = EntropyProfile::tabulated(table);
    const auto report = check_conditions(spec);
    EXPECT_TRUE(report.remark_sufficiency.pass) << trial;
    EXPECT_TRUE(report["A6"].pass) << trial;
  }
}

TEST(ModelSpec, Validation) {
  ModelSpec spec;
  spec.b = 2.0;
  spec.xi = 1.5;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec.b = 1.2;
  EXPECT_NO_THROW(spec.validate());
  spec.total_mass = 0.0;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace rotstar
