#include "magsim/sensitivity.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "magsim/errors.hpp"
#include "magsim/numerics.hpp"

namespace magsim {

std::string to_string(Regime r)
{
  switch (r) {
  case Regime::shot_limited:
    return "shot_limited";
  case Regime::stark_limited:
    return "stark_limited";
  case Regime::optimum:
    return "optimum";
  }
  return "?";
}

namespace {

void check_eta_open(double eta, const char* who)
{
  if (!(eta > 0.0) || !(eta < 1.0))
    throw DegenerateEta(std::string(who) + ": eta must lie strictly inside (0, 1)");
}

} // namespace

double faraday_counts(double eta, double n_in, double phi_sig)
{
  if (!(eta > 0.0) || eta > 1.0 || n_in < 0.0)
    throw InvalidArgument("faraday_counts: need eta in (0,1] and n_in >= 0");
  return eta * n_in * std::sin(phi_sig);
}

double count_variance(double eta, double n_in, double phase_var)
{
  if (phase_var < 0.0)
    throw InvalidArgument("count_variance: phase variance must be >= 0");
  return eta * n_in + eta * eta * n_in * n_in * phase_var;
}

DetectionResult detection(double eta, double n_in, double phi_sig, double phase_var)
{
  DetectionResult d;
  d.mean_counts = faraday_counts(eta, n_in, phi_sig);
  d.count_variance = count_variance(eta, n_in, phase_var);
  d.snr = d.count_variance > 0.0 ? d.mean_counts / std::sqrt(d.count_variance) : 0.0;
  return d;
}

double noise_bracket(const AtomicParams& p, double omega0_sq, double eta)
{
  if (!(eta > 0.0) || eta > 1.0)
    throw InvalidArgument("noise_bracket: eta must be in (0,1]");
  if (p.delta_eff == 0.0 || p.gamma0 == 0.0)
    throw DivisionByZero("noise_bracket: delta_eff and gamma0 must be nonzero");
  const double r = omega0_sq / (p.delta_eff * p.gamma0);
  return 1.0 + r * r * eta * (1.0 - eta) * std::log(1.0 / eta);
}

double snr(const AtomicParams& p, double omega0_sq, double eta, double n_in, double delta0)
{
  if (n_in < 0.0)
    throw InvalidArgument("snr: n_in must be >= 0");
  const double b = noise_bracket(p, omega0_sq, eta);
  return (delta0 / p.gamma0) * std::log(1.0 / eta) * std::sqrt(n_in * eta / b);
}

double min_detectable_shift(const AtomicParams& p, double omega0_sq, double eta, double n_in)
{
  check_eta_open(eta, "min_detectable_shift");
  if (!(n_in > 0.0))
    throw InvalidArgument("min_detectable_shift: n_in must be > 0");
  const double b = noise_bracket(p, omega0_sq, eta);
  return p.gamma0 * std::sqrt(b / (n_in * eta)) / std::log(1.0 / eta);
}

double optimal_rabi_sq(const AtomicParams& p, double eta)
{
  check_eta_open(eta, "optimal_rabi_sq");
  return p.delta_eff * p.gamma0 / std::sqrt(eta * (1.0 - eta) * std::log(1.0 / eta));
}

double sql_factor_f(double eta)
{
  check_eta_open(eta, "sql_factor_f");
  const double l = std::log(1.0 / eta);
  return std::pow((1.0 - eta) / (eta * l * l * l), 0.25);
}

double sql_factor_f_tilde(double eta)
{
  check_eta_open(eta, "sql_factor_f_tilde");
  const double l = std::log(1.0 / eta);
  return std::pow((1.0 - eta) * (l + eta - 1.0) / (eta * l * l * l * l), 0.25);
}

double optimal_eta(double tol)
{
  auto g = [](double eta) { return std::log(1.0 / eta) - 3.0 * (1.0 - eta); };
  return numerics::bisect_root(g, 1e-3, 0.5, tol);
}

double sql_min_shift(const AtomicParams& p, double eta, double lambda_sq_over_A, double gamma0_tm)
{
  if (!(lambda_sq_over_A > 0.0) || !(gamma0_tm > 0.0) || !(p.delta_eff > 0.0))
    throw InvalidArgument("sql_min_shift: lambda^2/A, gamma0 t_m and delta_eff must be > 0");
  const double inner = (p.gamma_r / p.delta_eff) * (3.0 / (8.0 * std::numbers::pi)) *
                       lambda_sq_over_A / gamma0_tm;
  return p.gamma0 * sql_factor_f(eta) * std::sqrt(inner);
}

double PowerMapping::rabi_sq(const AtomicParams& p, double power_ratio) const
{
  return 3.0 * p.gamma_r * p.gamma0 * power_ratio;
}

double PowerMapping::power_ratio(const AtomicParams& p, double rabi) const
{
  return rabi / (3.0 * p.gamma_r * p.gamma0);
}

double PowerMapping::photons(double power_ratio) const
{
  return power_ratio * 8.0 * std::numbers::pi * gamma0_tm / lambda_sq_over_A;
}

double generic_quantum_limit(double chi_ratio, double beta, double n_var)
{
  if (!(chi_ratio > 0.0))
    throw InvalidArgument("generic_quantum_limit: chi_ratio must be > 0");
  if (beta < 0.0)
    throw InvalidArgument("generic_quantum_limit: beta must be >= 0");
  if (!(n_var > 0.0))
    throw InvalidArgument("generic_quantum_limit: n_var must be > 0");
  return std::sqrt(1.0 / n_var + beta * beta * n_var) / chi_ratio;
}

QuantumLimitOptimum optimize_generic_quantum_limit(double chi_ratio, double beta)
{
  if (!(chi_ratio > 0.0) || beta < 0.0)
    throw InvalidArgument("optimize_generic_quantum_limit: need chi_ratio > 0 and beta >= 0");
  QuantumLimitOptimum q;
  if (beta == 0.0) {
    q.interior = false;
    q.n_var_opt = std::numeric_limits<double>::infinity();
    q.delta_omega_min = 0.0;
    return q;
  }
  q.n_var_opt = 1.0 / beta;
  q.delta_omega_min = std::sqrt(2.0 * beta) / chi_ratio;
  return q;
}

QuantumLimitOptimum minimize_generic_quantum_limit(double chi_ratio, double beta, double n_lo,
                                                   double n_hi)
{
  if (!(n_lo > 0.0) || !(n_hi > n_lo))
    throw InvalidArgument("minimize_generic_quantum_limit: need 0 < n_lo < n_hi");
  QuantumLimitOptimum q;
  if (beta == 0.0) {
    q.interior = false;
    q.n_var_opt = n_hi;
    q.delta_omega_min = generic_quantum_limit(chi_ratio, beta, n_hi);
    return q;
  }
  // Minimizing the square avoids the flat sqrt near the optimum.
  auto f = [&](double x) {
    const double n = std::exp(x);
    return 1.0 / n + beta * beta * n;
  };
  const double x = numerics::golden_section_min(f, std::log(n_lo), std::log(n_hi), 1e-12);
  q.n_var_opt = std::exp(x);
  q.delta_omega_min = generic_quantum_limit(chi_ratio, beta, q.n_var_opt);
  return q;
}

SensitivityCurve opm_sensitivity_curve(const AtomicParams& p, double alpha,
                                       std::span<const double> power_grid,
                                       const PowerMapping& map, bool stark_term)
{
  if (power_grid.empty())
    throw InvalidArgument("opm_sensitivity_curve: empty power grid");
  SensitivityCurve c;
  c.label = stark_term ? "opm_schematic_stark" : "opm_schematic";
  const double crit = p.gamma * p.gamma0;
  for (double pr : power_grid) {
    SensitivityPoint pt;
    pt.power_ratio = pr;
    pt.rabi_sq = map.rabi_sq(p, pr);
    pt.n_in = map.photons(pr);
    double width = power_broadened_width(p, std::sqrt(pt.rabi_sq), alpha);
    if (stark_term)
      width += pt.rabi_sq / p.delta_eff;
    pt.min_delta0 = width / std::sqrt(pt.n_in);
    pt.bracket = width / p.gamma0;
    pt.regime_tag = pt.rabi_sq < crit ? Regime::shot_limited : Regime::stark_limited;
    c.points.push_back(pt);
  }
  return c;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n)
{
  if (!(lo > 0.0) || !(hi >= lo) || n == 0)
    throw InvalidArgument("log_grid: need 0 < lo <= hi and n > 0");
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t k = 0; k < n; ++k)
    g[k] = std::pow(10.0, a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
  g.back() = hi;
  return g;
}

} // namespace magsim
