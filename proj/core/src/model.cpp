#include "rotstar/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

namespace rotstar {

namespace {

bool finite(double x) { return std::isfinite(x); }

// expm1(x)/x, continuous through 0.
double exprel(double x) {
  if (std::abs(x) < 1e-5) return 1.0 + x / 2.0 + x * x / 6.0;
  return std::expm1(x) / x;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

double lattice(double hi, std::size_t i, std::size_t count) {
  return hi * static_cast<double>(i) / static_cast<double>(count - 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// PiecewiseLinear

PiecewiseLinear::PiecewiseLinear(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) throw std::invalid_argument("table needs at least two samples");
  x_.reserve(samples.size());
  y_.reserve(samples.size());
  for (const auto& [x, y] : samples) {
    if (!finite(x) || !finite(y)) throw std::invalid_argument("table sample is not finite");
    if (!x_.empty() && !(x > x_.back())) {
      throw std::invalid_argument("table abscissas must be strictly increasing");
    }
    x_.push_back(x);
    y_.push_back(y);
  }
}

std::size_t PiecewiseLinear::segment(double x) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const auto k = static_cast<std::size_t>(std::distance(x_.begin(), it));
  return std::clamp<std::size_t>(k == 0 ? 0 : k - 1, 0, x_.size() - 2);
}

double PiecewiseLinear::operator()(double x) const {
  const std::size_t k = segment(x);
  const double t = (x - x_[k]) / (x_[k + 1] - x_[k]);
  return y_[k] + t * (y_[k + 1] - y_[k]);
}

double PiecewiseLinear::slope(double x) const {
  const std::size_t k = segment(x);
  return (y_[k + 1] - y_[k]) / (x_[k + 1] - x_[k]);
}

// ---------------------------------------------------------------------------
// EquationOfState

EquationOfState EquationOfState::polytrope(double K, double gamma, std::optional<double> gamma_bar) {
  if (!(K > 0.0) || !finite(K)) throw std::invalid_argument("polytrope needs K > 0");
  if (!(gamma > 1.0) || !finite(gamma)) throw std::invalid_argument("polytrope needs gamma > 1");
  if (gamma_bar && !(*gamma_bar > 1.0)) throw std::invalid_argument("gamma_bar must exceed 1");
  EquationOfState eos;
  eos.law_ = Polytrope{K, gamma};
  eos.gamma_bar_ = gamma_bar;
  return eos;
}

EquationOfState EquationOfState::tabulated(std::vector<std::pair<double, double>> samples,
                                           std::optional<double> gamma_bar) {
  if (!samples.empty() && samples.front().first == 0.0) {
    if (samples.front().second != 0.0) throw std::invalid_argument("tabulated f must vanish at 0");
    samples.erase(samples.begin());
  }
  if (samples.size() < 2) throw std::invalid_argument("tabulated f needs two positive samples");
  if (!(samples.front().first > 0.0)) throw std::invalid_argument("tabulated f abscissas must be >= 0");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].second > 0.0)) throw std::invalid_argument("tabulated f must be positive for s > 0");
    if (i > 0 && !(samples[i].second > samples[i - 1].second)) {
      throw std::invalid_argument("tabulated f must be strictly increasing");
    }
  }
  if (gamma_bar && !(*gamma_bar > 1.0)) throw std::invalid_argument("gamma_bar must exceed 1");

  Tabulated tab{PiecewiseLinear(std::move(samples)), 0.0, {}};
  const auto& x = tab.table.abscissas();
  const auto& y = tab.table.values();
  tab.low_exponent = std::log(y[1] / y[0]) / std::log(x[1] / x[0]);
  if (!(tab.low_exponent > 1.0)) {
    throw std::invalid_argument("tabulated f grows too slowly near 0: int f t^-2 diverges");
  }
  tab.cumulative.resize(x.size());
  tab.cumulative[0] = y[0] / (x[0] * (tab.low_exponent - 1.0));
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    const double m = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
    const double alpha = y[k] - m * x[k];
    tab.cumulative[k + 1] =
        tab.cumulative[k] + alpha * (1.0 / x[k] - 1.0 / x[k + 1]) + m * std::log(x[k + 1] / x[k]);
  }

  EquationOfState eos;
  eos.law_ = std::move(tab);
  eos.gamma_bar_ = gamma_bar;
  return eos;
}

double EquationOfState::max_density() const {
  if (const auto* tab = as_tabulated()) return tab->table.back();
  return std::numeric_limits<double>::infinity();
}

double EquationOfState::pressure(double s) const {
  if (!(s >= 0.0)) throw std::invalid_argument("density must be nonnegative");
  if (const auto* p = as_polytrope()) return p->K * std::pow(s, p->gamma);
  const auto& tab = std::get<Tabulated>(law_);
  if (s > tab.table.back()) throw std::range_error("density beyond the tabulated equation of state");
  if (s <= tab.table.front()) {
    return tab.table.values().front() * std::pow(s / tab.table.front(), tab.low_exponent);
  }
  return tab.table(s);
}

double EquationOfState::integral_f_over_t2(double s) const {
  const auto& tab = std::get<Tabulated>(law_);
  const auto& x = tab.table.abscissas();
  const auto& y = tab.table.values();
  if (s > x.back()) throw std::range_error("density beyond the tabulated equation of state");
  if (s <= x.front()) {
    return (y[0] / x[0]) * std::pow(s / x[0], tab.low_exponent - 1.0) / (tab.low_exponent - 1.0);
  }
  const auto it = std::upper_bound(x.begin(), x.end(), s);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(std::distance(x.begin(), it)) - 1, x.size() - 2);
  const double m = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
  const double alpha = y[k] - m * x[k];
  return tab.cumulative[k] + alpha * (1.0 / x[k] - 1.0 / s) + m * std::log(s / x[k]);
}

double EquationOfState::energy_density(double s) const {
  if (!(s >= 0.0)) throw std::invalid_argument("density must be nonnegative");
  if (s == 0.0) return 0.0;
  if (const auto* p = as_polytrope()) return p->K * std::pow(s, p->gamma) / (p->gamma - 1.0);
  return s * integral_f_over_t2(s);
}

double EquationOfState::marginal_energy(double s) const {
  if (!(s >= 0.0)) throw std::invalid_argument("density must be nonnegative");
  if (s == 0.0) return 0.0;
  if (const auto* p = as_polytrope()) {
    return p->K * p->gamma * std::pow(s, p->gamma - 1.0) / (p->gamma - 1.0);
  }
  return integral_f_over_t2(s) + pressure(s) / s;
}

double EquationOfState::density_from_marginal(double y) const {
  if (!(y >= 0.0)) throw std::invalid_argument("marginal energy must be nonnegative");
  if (y == 0.0) return 0.0;
  if (const auto* p = as_polytrope()) {
    return std::pow((p->gamma - 1.0) * y / (p->K * p->gamma), 1.0 / (p->gamma - 1.0));
  }
  const auto& tab = std::get<Tabulated>(law_);
  const auto& x = tab.table.abscissas();
  const double y0 = tab.table.values().front();
  const double p = tab.low_exponent;
  // Below the first sample A'(s) = (y0/x0) (s/x0)^(p-1) p/(p-1).
  const double low_top = (y0 / x[0]) * p / (p - 1.0);
  if (y <= low_top) return x[0] * std::pow(y / low_top, 1.0 / (p - 1.0));
  if (y > marginal_energy(x.back())) throw std::range_error("marginal energy beyond the tabulated range");

  std::size_t lo = 0, hi = x.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (marginal_energy(x[mid]) < y ? lo : hi) = mid;
  }
  std::uintmax_t iterations = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      [&](double s) { return marginal_energy(s) - y; }, x[lo], x[hi],
      boost::math::tools::eps_tolerance<double>(46), iterations);
  return 0.5 * (a + b);
}

double energy_density_by_quadrature(const EquationOfState& eos, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("density must be nonnegative");
  if (s == 0.0) return 0.0;
  const auto integrand = [&](double t) { return t > 0.0 ? eos.pressure(t) / t / t : 0.0; };
  constexpr double tol = 1e-14;
  std::vector<double> breaks{0.0};
  if (const auto* tab = eos.as_tabulated()) {
    if (s > tab->table.back()) throw std::range_error("density beyond the tabulated equation of state");
    for (double x : tab->table.abscissas()) {
      if (x < s) breaks.push_back(x);
    }
  }
  breaks.push_back(s);
  boost::math::quadrature::tanh_sinh<double> near_zero;
  double total = near_zero.integrate(integrand, breaks[0], breaks[1], tol);
  for (std::size_t k = 1; k + 1 < breaks.size(); ++k) {
    total += boost::math::quadrature::gauss_kronrod<double, 21>::integrate(integrand, breaks[k], breaks[k + 1],
                                                                           10, tol);
  }
  return s * total;
}

// ---------------------------------------------------------------------------
// EntropyProfile

EntropyProfile EntropyProfile::linear(double slope, std::optional<double> delta0) {
  if (!finite(slope)) throw std::invalid_argument("entropy slope must be finite");
  if (delta0 && !(*delta0 > 0.0)) throw std::invalid_argument("delta0 must be positive");
  EntropyProfile e;
  e.slope_ = slope;
  e.delta0_ = delta0;
  return e;
}

EntropyProfile EntropyProfile::tabulated(std::vector<std::pair<double, double>> samples,
                                         std::optional<double> delta0) {
  if (samples.empty() || samples.front().first != 0.0) {
    throw std::invalid_argument("entropy table must start at n = 0");
  }
  if (delta0 && !(*delta0 > 0.0)) throw std::invalid_argument("delta0 must be positive");
  EntropyProfile e;
  e.table_ = PiecewiseLinear(std::move(samples));
  e.delta0_ = delta0;
  return e;
}

double EntropyProfile::entropy(double n) const {
  if (slope_) return -*slope_ * n;
  return table_(n);
}

double EntropyProfile::entropy_slope(double n) const {
  if (slope_) return -*slope_;
  return table_.slope(n);
}

double EntropyProfile::temperature_slope(double n) const { return entropy_slope(n) * temperature(n); }

double EntropyProfile::mean_temperature(double n0, double n1) const {
  if (n1 < n0) std::swap(n0, n1);
  const double width = n1 - n0;
  if (width == 0.0) return temperature(n0);
  if (slope_) return std::exp(-*slope_ * n0) * exprel(-*slope_ * width);

  const auto& x = table_.abscissas();
  double integral = 0.0;
  double a = n0;
  while (a < n1) {
    auto it = std::upper_bound(x.begin(), x.end(), a);
    double b = (it == x.end()) ? n1 : std::min(n1, *it);
    if (b <= a) b = n1;
    const double k = table_.slope(a);
    integral += std::exp(table_(a)) * (b - a) * exprel(k * (b - a));
    a = b;
  }
  return integral / width;
}

double EntropyProfile::vacuum_margin(double total_mass) const {
  return delta0_ ? *delta0_ : 0.1 * total_mass;
}

bool EntropyProfile::is_isentropic() const {
  if (slope_) return *slope_ == 0.0;
  const auto& v = table_.values();
  return std::all_of(v.begin(), v.end(), [](double s) { return s == 0.0; });
}

// ---------------------------------------------------------------------------
// AngularMomentumProfile

AngularMomentumProfile AngularMomentumProfile::power(double beta, double q) {
  if (!(beta >= 0.0) || !finite(beta)) throw std::invalid_argument("angular momentum needs beta >= 0");
  if (!(q > 0.0) || !finite(q)) throw std::invalid_argument("angular momentum needs q > 0");
  AngularMomentumProfile L;
  L.power_ = std::make_pair(beta, q);
  return L;
}

AngularMomentumProfile AngularMomentumProfile::tabulated(std::vector<std::pair<double, double>> samples) {
  if (samples.empty() || samples.front().first != 0.0) {
    throw std::invalid_argument("angular momentum table must start at m = 0");
  }
  AngularMomentumProfile L;
  L.table_ = PiecewiseLinear(std::move(samples));
  return L;
}

double AngularMomentumProfile::operator()(double m) const {
  if (power_) {
    if (power_->first == 0.0 || m <= 0.0) return 0.0;
    return power_->first * std::pow(m, power_->second);
  }
  return table_(m);
}

double AngularMomentumProfile::slope(double m) const {
  if (power_) {
    const auto [beta, q] = *power_;
    if (beta == 0.0) return 0.0;
    if (m <= 0.0) return q < 1.0 ? std::numeric_limits<double>::infinity() : (q == 1.0 ? beta : 0.0);
    return beta * q * std::pow(m, q - 1.0);
  }
  return table_.slope(m);
}

bool AngularMomentumProfile::is_zero() const {
  if (power_) return power_->first == 0.0;
  const auto& v = table_.values();
  return std::all_of(v.begin(), v.end(), [](double s) { return s == 0.0; });
}

// ---------------------------------------------------------------------------
// ModelSpec and condition checks

void ModelSpec::validate() const {
  if (!(total_mass > 0.0) || !finite(total_mass)) throw std::invalid_argument("total mass must be positive");
  if (!(b > 0.0) || !finite(b)) throw std::invalid_argument("ellipticity b must be positive");
  if (xi) {
    if (!(*xi > 1.0)) throw std::invalid_argument("xi must exceed 1");
    if (b < 1.0 / *xi * (1.0 - 1e-12) || b > *xi * (1.0 + 1e-12)) {
      throw std::invalid_argument("b outside [1/xi, xi]");
    }
  }
}

bool ConditionReport::all_pass() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const ConditionResult& c) { return c.pass; });
}

const ConditionResult& ConditionReport::operator[](const std::string& name) const {
  for (const auto& c : conditions) {
    if (c.name == name) return c;
  }
  if (remark_sufficiency.name == name) return remark_sufficiency;
  throw std::out_of_range("no condition named " + name);
}

bool angular_momentum_scaling_holds(const AngularMomentumProfile& L, double a, double m) {
  const double lhs = L(a * m);
  const double rhs = std::pow(a, 4.0 / 3.0) * L(m);
  return lhs >= rhs - 1e-12 * std::max(1.0, std::abs(rhs));
}

bool entropy_scaling_holds(const EntropyProfile& S, double M, double a, double n) {
  const double rhs = std::pow(a, 2.0 / 3.0) * S.temperature(n);
  const double slack = 1e-12 * std::max(1.0, rhs);
  return S.temperature(a * n) >= rhs - slack && S.temperature(M - a * M + a * n) >= rhs - slack;
}

namespace {

void fail(ConditionResult& r, Counterexample c) {
  if (r.pass) r.counterexample = c;
  r.pass = false;
}

ConditionResult check_a1(const EquationOfState& eos, std::size_t count) {
  ConditionResult r{"A1"};
  const double lo = eos.is_polytrope() ? 1e-8 : eos.as_tabulated()->table.front() * 1e-3;
  const double hi = eos.is_polytrope() ? 1e8 : eos.max_density();
  const auto s = log_spaced(lo, hi, std::max<std::size_t>(count, 3));
  r.samples = s.size();
  if (eos.pressure(0.0) != 0.0) fail(r, {0.0, 0.0, eos.pressure(0.0), 0.0});
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    if (!(eos.pressure(s[k + 1]) > eos.pressure(s[k]))) {
      fail(r, {0.0, s[k + 1], eos.pressure(s[k + 1]), eos.pressure(s[k])});
    }
  }
  // f s^-4/3 -> 0 at 0 and -> infinity at infinity: the local power-law
  // exponent at both ends of the sampled range must exceed 4/3.
  const auto exponent = [&](double a, double b) {
    return std::log(eos.pressure(b) / eos.pressure(a)) / std::log(b / a);
  };
  const double low = exponent(s[0], s[1]);
  const double high = exponent(s[s.size() - 2], s.back());
  constexpr double critical = 4.0 / 3.0 + 1e-9;
  if (!(low > critical)) fail(r, {0.0, s[0], low, 4.0 / 3.0});
  if (!(high > critical)) fail(r, {0.0, s.back(), high, 4.0 / 3.0});
  r.note = "end exponents " + std::to_string(low) + ", " + std::to_string(high);
  return r;
}

ConditionResult check_a2(const EquationOfState& eos, std::size_t count) {
  ConditionResult r{"A2"};
  const double hi = eos.is_polytrope() ? 1e8 : eos.max_density();
  const double lo = hi / 10.0;
  r.samples = 2;
  (void)count;
  const double high = std::log(eos.pressure(hi) / eos.pressure(lo)) / std::log(hi / lo);
  if (const auto gb = eos.declared_gamma_bar()) {
    if (!(high < *gb)) fail(r, {0.0, hi, high, *gb});
    r.note = "declared gamma_bar " + std::to_string(*gb);
  } else {
    r.note = "no gamma_bar declared; witness gamma_bar = " + std::to_string(std::max(high, 1.0) + 1.0);
  }
  return r;
}

ConditionResult check_a3(const AngularMomentumProfile& L, double M, std::size_t count) {
  ConditionResult r{"A3"};
  r.samples = count;
  if (L(0.0) != 0.0) fail(r, {0.0, 0.0, L(0.0), 0.0});
  for (std::size_t j = 0; j < count; ++j) {
    const double m = lattice(M, j, count);
    if (!(L(m) >= 0.0) || !finite(L(m))) fail(r, {0.0, m, L(m), 0.0});
  }
  return r;
}

ConditionResult check_a4(const AngularMomentumProfile& L, double M, std::size_t count) {
  ConditionResult r{"A4"};
  r.samples = count * count;
  for (std::size_t i = 0; i < count; ++i) {
    const double a = lattice(1.0, i, count);
    for (std::size_t j = 0; j < count; ++j) {
      const double m = lattice(M, j, count);
      if (!angular_momentum_scaling_holds(L, a, m)) {
        fail(r, {a, m, L(a * m), std::pow(a, 4.0 / 3.0) * L(m)});
      }
    }
  }
  // Solberg monotonicity L' >= 0.
  for (std::size_t j = 0; j + 1 < count; ++j) {
    const double m0 = lattice(M, j, count), m1 = lattice(M, j + 1, count);
    if (L(m1) < L(m0) - 1e-12 * std::max(1.0, std::abs(L(m0)))) fail(r, {1.0, m1, L(m1), L(m0)});
  }
  return r;
}

ConditionResult check_a5(const EntropyProfile& S, double M, std::size_t count) {
  ConditionResult r{"A5"};
  r.samples = count;
  if (std::abs(S.entropy(0.0)) > 1e-14) fail(r, {0.0, 0.0, S.entropy(0.0), 0.0});
  for (std::size_t j = 0; j < count; ++j) {
    const double n = lattice(M, j, count);
    if (!finite(S.entropy(n)) || !finite(S.entropy_slope(n))) fail(r, {0.0, n, S.entropy_slope(n), 0.0});
  }
  return r;
}

ConditionResult check_a6(const EntropyProfile& S, double M, std::size_t count) {
  ConditionResult r{"A6"};
  r.samples = count * count;
  for (std::size_t i = 0; i < count; ++i) {
    const double a = lattice(1.0, i, count);
    for (std::size_t j = 0; j < count; ++j) {
      const double n = lattice(M, j, count);
      if (!entropy_scaling_holds(S, M, a, n)) {
        const double rhs = std::pow(a, 2.0 / 3.0) * S.temperature(n);
        const double lhs = std::min(S.temperature(a * n), S.temperature(M - a * M + a * n));
        fail(r, {a, n, lhs, rhs});
      }
    }
  }
  return r;
}

ConditionResult check_a7(const EntropyProfile& S, double M, std::size_t count) {
  ConditionResult r{"A7"};
  r.samples = count;
  const double delta0 = S.vacuum_margin(M);
  const double start = std::max(0.0, M - delta0);
  for (std::size_t j = 0; j < count; ++j) {
    const double n = start + (M - start) * static_cast<double>(j) / static_cast<double>(count - 1);
    if (S.entropy_slope(n) > 0.0) fail(r, {0.0, n, S.entropy_slope(n), 0.0});
  }
  r.note = "delta0 = " + std::to_string(delta0);
  return r;
}

}  // namespace

ConditionReport check_conditions(const ModelSpec& spec, std::size_t samples) {
  if (samples < 2) throw std::invalid_argument("need at least two samples per axis");
  spec.validate();
  const double M = spec.total_mass;
  ConditionReport report;
  report.conditions.push_back(check_a1(spec.eos, samples));
  report.conditions.push_back(check_a2(spec.eos, samples));
  report.conditions.push_back(check_a3(spec.angmom, M, samples));
  report.conditions.push_back(check_a4(spec.angmom, M, samples));
  report.conditions.push_back(check_a5(spec.entropy, M, samples));
  report.conditions.push_back(check_a6(spec.entropy, M, samples));
  report.conditions.push_back(check_a7(spec.entropy, M, samples));

  // T bounds on a fixed 10^3-point sample of [0, M].
  constexpr std::size_t t_samples = 1000;
  double t_max = 0.0, slope_max = 0.0, t_min = std::numeric_limits<double>::infinity();
  double sup_entropy_slope = 0.0;
  for (std::size_t j = 0; j < t_samples; ++j) {
    const double n = lattice(M, j, t_samples);
    const double T = spec.entropy.temperature(n);
    t_max = std::max(t_max, T);
    t_min = std::min(t_min, T);
    slope_max = std::max(slope_max, std::abs(spec.entropy.temperature_slope(n)));
    sup_entropy_slope = std::max(sup_entropy_slope, std::abs(spec.entropy.entropy_slope(n)));
  }
  report.T0 = std::max(t_max, slope_max);
  report.T1 = t_min;
  ConditionResult tb{"T-bounds"};
  tb.samples = t_samples;
  if (!(t_min > 0.0)) fail(tb, {0.0, 0.0, t_min, 0.0});
  if (spec.entropy.declared_upper && *spec.entropy.declared_upper < report.T0) {
    fail(tb, {0.0, 0.0, report.T0, *spec.entropy.declared_upper});
  }
  if (spec.entropy.declared_lower &&
      (*spec.entropy.declared_lower > report.T1 || !(*spec.entropy.declared_lower > 0.0))) {
    fail(tb, {0.0, 0.0, *spec.entropy.declared_lower, report.T1});
  }
  report.conditions.push_back(tb);

  ConditionResult suff{"sufficient-A6"};
  suff.samples = t_samples;
  const double bound = 2.0 / (3.0 * M);
  if (sup_entropy_slope > bound * (1.0 + 1e-12)) fail(suff, {0.0, M, sup_entropy_slope, bound});
  suff.note = "sup|S'| = " + std::to_string(sup_entropy_slope);
  report.remark_sufficiency = suff;
  return report;
}

}  // namespace rotstar
