#pragma once

// Structure functions of the star: equation of state f, entropy profile S(n)
// and squared angular momentum per unit mass L(m), plus sampled checks of
// the structural conditions (A1)-(A7) they have to satisfy.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rotstar {

/// Monotone piecewise-linear table on strictly increasing abscissas.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  explicit PiecewiseLinear(std::vector<std::pair<double, double>> samples);

  double operator()(double x) const;
  /// Slope of the segment containing x (right-continuous; end slopes are
  /// extended past the table).
  double slope(double x) const;

  const std::vector<double>& abscissas() const { return x_; }
  const std::vector<double>& values() const { return y_; }
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

 private:
  std::size_t segment(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
};

/// Pressure law p = f(rho) e^S.
///
/// Two families: the polytrope f(s) = K s^gamma and a tabulated f with
/// positive, strictly increasing samples. Below the first tabulated sample
/// f is continued as the power law through the first two samples, so that
/// f(t) t^-2 stays integrable at 0; above the last sample f is undefined.
class EquationOfState {
 public:
  struct Polytrope {
    double K;
    double gamma;
  };
  struct Tabulated {
    PiecewiseLinear table;
    double low_exponent;              // power-law exponent below the table
    std::vector<double> cumulative;   // int_0^{s_k} f(t) t^-2 dt at samples
  };

  static EquationOfState polytrope(double K, double gamma,
                                   std::optional<double> gamma_bar = {});
  static EquationOfState tabulated(std::vector<std::pair<double, double>> samples,
                                   std::optional<double> gamma_bar = {});

  /// f(s).
  double pressure(double s) const;
  /// A(s) = s int_0^s f(t) t^-2 dt (closed form per family).
  double energy_density(double s) const;
  /// A'(s) = A(s)/s + f(s)/s, with A'(0) = 0.
  double marginal_energy(double s) const;
  /// Unique s >= 0 with A'(s) = y.
  double density_from_marginal(double y) const;

  /// Largest density at which f is defined (infinity for the polytrope).
  double max_density() const;
  std::optional<double> declared_gamma_bar() const { return gamma_bar_; }

  bool is_polytrope() const { return std::holds_alternative<Polytrope>(law_); }
  const Polytrope* as_polytrope() const { return std::get_if<Polytrope>(&law_); }
  const Tabulated* as_tabulated() const { return std::get_if<Tabulated>(&law_); }

 private:
  EquationOfState() = default;
  double integral_f_over_t2(double s) const;

  std::variant<Polytrope, Tabulated> law_{Polytrope{1.0, 2.0}};
  std::optional<double> gamma_bar_;
};

/// A(s) by adaptive quadrature of f(t) t^-2 on [0, s], independent of the
/// family-specific closed forms.
double energy_density_by_quadrature(const EquationOfState& eos, double s);

/// Entropy per unit mass as a function of the enclosed ellipsoidal mass.
class EntropyProfile {
 public:
  static EntropyProfile linear(double slope, std::optional<double> delta0 = {});
  static EntropyProfile tabulated(std::vector<std::pair<double, double>> samples,
                                  std::optional<double> delta0 = {});

  double entropy(double n) const;
  double entropy_slope(double n) const;
  /// T(n) = e^S(n).
  double temperature(double n) const { return std::exp(entropy(n)); }
  double temperature_slope(double n) const;
  /// Mean of T over [n0, n1], exact for both families; T(n0) when n1 == n0.
  double mean_temperature(double n0, double n1) const;

  /// Vacuum margin delta0 of (A7); when not declared, 10% of the mass.
  double vacuum_margin(double total_mass) const;
  bool is_isentropic() const;

  /// Optional declared bounds T1 <= T <= T0, |T'| <= T0.
  std::optional<double> declared_upper;
  std::optional<double> declared_lower;

 private:
  EntropyProfile() = default;

  std::optional<double> slope_;  // S = -slope * n
  PiecewiseLinear table_;
  std::optional<double> delta0_;
};

/// L(m): squared angular momentum per unit mass against cylindrical mass.
class AngularMomentumProfile {
 public:
  static AngularMomentumProfile power(double beta, double q);
  static AngularMomentumProfile tabulated(std::vector<std::pair<double, double>> samples);
  static AngularMomentumProfile none() { return power(0.0, 4.0 / 3.0); }

  double operator()(double m) const;
  double slope(double m) const;
  bool is_zero() const;

 private:
  AngularMomentumProfile() = default;

  std::optional<std::pair<double, double>> power_;  // (beta, q)
  PiecewiseLinear table_;
};

struct ModelSpec {
  EquationOfState eos = EquationOfState::polytrope(1.0, 2.0);
  EntropyProfile entropy = EntropyProfile::linear(0.0);
  AngularMomentumProfile angmom = AngularMomentumProfile::none();
  double total_mass = 1.0;
  double b = 1.0;
  std::optional<double> xi;  // admissible ellipticities [1/xi, xi]

  /// Throws std::invalid_argument when M <= 0, b <= 0, xi <= 1 or b is
  /// outside [1/xi, xi].
  void validate() const;
};

struct Counterexample {
  double a;    // scaling factor (or 0 when not applicable)
  double x;    // density s, mass m or mass n, depending on the condition
  double lhs;
  double rhs;
};

struct ConditionResult {
  std::string name;
  bool pass = true;
  std::optional<Counterexample> counterexample;
  std::size_t samples = 0;
  std::string note;
};

struct ConditionReport {
  std::vector<ConditionResult> conditions;  // A1..A7, T-bounds
  ConditionResult remark_sufficiency;       // sup|S'| <= 2/(3M), informative
  double T0 = 0.0;
  double T1 = 0.0;

  bool all_pass() const;
  const ConditionResult& operator[](const std::string& name) const;
};

/// Sampled verification of (A1)-(A7) and the T bounds. `samples` is the
/// lattice size per axis (>= 2).
ConditionReport check_conditions(const ModelSpec& spec, std::size_t samples = 100);

/// Single-point forms of the lattice checks, used to re-evaluate a reported
/// counterexample.
bool angular_momentum_scaling_holds(const AngularMomentumProfile& L, double a, double m);
bool entropy_scaling_holds(const EntropyProfile& S, double total_mass, double a, double n);

}  // namespace rotstar
