#include "magsim/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "magsim/errors.hpp"
#include "magsim/numerics.hpp"

namespace magsim {

std::vector<double> IntensityProfile::totals() const
{
  std::vector<double> out(size());
  for (std::size_t k = 0; k < size(); ++k)
    out[k] = total(k);
  return out;
}

namespace {

IntensityProfile integrate(const AtomicParams& p, const FieldState& input, double length,
                           std::size_t steps)
{
  const double c = p.kappa * p.gamma0 * p.gamma_r;
  const double sat = 2.0 * p.gamma0 * p.gamma;
  auto rhs = [c, sat](double, const numerics::State<2>& y) -> numerics::State<2> {
    const double total = y[0] + y[1];
    const double loss = total > 0.0 ? c * y[0] * y[1] / (total * (sat + total)) : 0.0;
    return {-loss, -loss};
  };
  const numerics::State<2> y0{std::norm(input.omega_plus), std::norm(input.omega_minus)};
  const auto ys = numerics::rk4_integrate<2>(rhs, 0.0, length, y0, steps);

  IntensityProfile prof;
  prof.length = length;
  prof.z.resize(steps + 1);
  prof.i_plus.resize(steps + 1);
  prof.i_minus.resize(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    prof.z[k] = length * static_cast<double>(k) / static_cast<double>(steps);
    prof.i_plus[k] = ys[k][0];
    prof.i_minus[k] = ys[k][1];
    const double total = ys[k][0] + ys[k][1];
    if (!std::isfinite(total) || ys[k][0] < 0.0 || ys[k][1] < 0.0 || total <= 0.0) {
      std::ostringstream os;
      os << "intensity left the positive range at z = " << prof.z[k]
         << "; the cell is longer than the field can propagate";
      throw IntensityUnderflow(os.str());
    }
  }
  return prof;
}

} // namespace

IntensityProfile propagate_intensity_ode(const AtomicParams& p, const FieldState& input,
                                         double length, const PropagationOptions& opt)
{
  if (!(input.intensity() > 0.0))
    throw InvalidArgument("propagate_intensity_ode: input intensity must be > 0");
  if (!(length > 0.0))
    throw InvalidArgument("propagate_intensity_ode: length must be > 0");
  if (opt.steps < 2)
    throw InvalidArgument("propagate_intensity_ode: need at least 2 steps");

  IntensityProfile coarse = integrate(p, input, length, opt.steps);
  const IntensityProfile fine = integrate(p, input, length, 2 * opt.steps);
  double worst = 0.0;
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    const double a = coarse.total(k);
    const double b = fine.total(2 * k);
    worst = std::max(worst, std::abs(a - b) / b);
  }
  if (worst > opt.richardson_tol) {
    std::ostringstream os;
    os << "RK4 with " << opt.steps << " steps deviates by " << worst
       << " (relative) from the 2x refined run; tolerance " << opt.richardson_tol;
    throw StepTooCoarse(os.str());
  }
  return coarse;
}

IntensityProfile propagate_intensity_ode(const AtomicParams& p, double omega0_sq, double length,
                                         const PropagationOptions& opt)
{
  if (!(omega0_sq > 0.0))
    throw InvalidArgument("propagate_intensity_ode: omega0_sq must be > 0");
  return propagate_intensity_ode(p, FieldState::faraday(omega0_sq), length, opt);
}

IntensityProfile linear_profile(double omega0_sq, double eta, double length, std::size_t steps)
{
  if (!(omega0_sq > 0.0) || !(eta > 0.0) || eta > 1.0 || !(length > 0.0) || steps < 1)
    throw InvalidArgument("linear_profile: need omega0_sq > 0, eta in (0,1], length > 0");
  IntensityProfile prof;
  prof.length = length;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double z = length * static_cast<double>(k) / static_cast<double>(steps);
    const double i = omega0_sq * (1.0 - (1.0 - eta) * z / length);
    prof.z.push_back(z);
    prof.i_plus.push_back(0.5 * i);
    prof.i_minus.push_back(0.5 * i);
  }
  return prof;
}

double absorption_coefficient(const AtomicParams& p, double omega0_sq)
{
  if (!(omega0_sq > 0.0))
    throw InvalidArgument("absorption_coefficient: omega0_sq must be > 0");
  return p.gamma0 * p.gamma_r * p.kappa / (2.0 * omega0_sq);
}

double length_for_eta_linear(const AtomicParams& p, double omega0_sq, double eta)
{
  if (!(eta > 0.0) || eta > 1.0)
    throw InvalidArgument("length_for_eta_linear: eta must be in (0,1]");
  const double a0 = absorption_coefficient(p, omega0_sq);
  if (a0 == 0.0)
    throw DivisionByZero("length_for_eta_linear: no absorption (gamma0 or kappa is 0)");
  return (1.0 - eta) / a0;
}

double length_for_eta_exact(const AtomicParams& p, double omega0_sq, double eta)
{
  if (!(eta > 0.0) || eta > 1.0)
    throw InvalidArgument("length_for_eta_exact: eta must be in (0,1]");
  if (!(omega0_sq > 0.0))
    throw InvalidArgument("length_for_eta_exact: omega0_sq must be > 0");
  const double c = p.gamma0 * p.gamma_r * p.kappa;
  if (c == 0.0)
    throw DivisionByZero("length_for_eta_exact: no absorption (gamma0 or kappa is 0)");
  const double lost = omega0_sq * (1.0 - eta) + 2.0 * p.gamma * p.gamma0 * std::log(1.0 / eta);
  return 2.0 * lost / c;
}

Transmission transmission(const AtomicParams& p, double omega0_sq, double length,
                          const PropagationOptions& opt)
{
  if (length < 0.0)
    throw InvalidArgument("transmission: length must be >= 0");
  Transmission t;
  if (length == 0.0)
    return t;
  t.eta_analytic = 1.0 - absorption_coefficient(p, omega0_sq) * length;
  t.eta_ode = propagate_intensity_ode(p, omega0_sq, length, opt).eta();
  const double out = t.eta_analytic * omega0_sq;
  t.valid = t.eta_analytic > 0.0 && out >= 100.0 * p.gamma * p.gamma0;
  if (!t.valid) {
    std::ostringstream os;
    os << "linear absorption solution outside validity (|Omega(L)|^2 = " << out
       << ", need >> 2 gamma gamma0); using the ODE transmission";
    t.warnings.push_back(os.str());
  }
  t.eta = t.valid ? t.eta_analytic : t.eta_ode;
  return t;
}

PhaseProfile propagate_phases(const AtomicParams& p, const IntensityProfile& profile,
                              std::span<const double> stark_plus,
                              std::span<const double> stark_minus)
{
  const std::size_t n = profile.size();
  if (n < 2)
    throw InvalidArgument("propagate_phases: profile needs at least 2 nodes");
  if ((!stark_plus.empty() && stark_plus.size() != n) ||
      (!stark_minus.empty() && stark_minus.size() != n))
    throw InvalidArgument("propagate_phases: stark shift arrays must match the profile");

  const double pref = p.kappa * p.gamma_r / (2.0 * p.gamma);
  const double sat = 2.0 * p.gamma0 * p.gamma;
  std::vector<double> fp(n), fm(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double dp = stark_plus.empty() ? 0.0 : stark_plus[k];
    const double dm = stark_minus.empty() ? 0.0 : stark_minus[k];
    const double den = sat + profile.total(k);
    fp[k] = pref * (p.delta_big * p.gamma0 - p.gamma * (0.5 * p.delta0 + dp)) / den;
    fm[k] = pref * (p.delta_big * p.gamma0 + p.gamma * (0.5 * p.delta0 - dm)) / den;
  }
  const double h = profile.step();
  return {numerics::cumulative_integral(fp, h), numerics::cumulative_integral(fm, h)};
}

double signal_phase(double delta0, double gamma0, double eta)
{
  if (!(eta > 0.0) || eta > 1.0)
    throw InvalidArgument("signal_phase: eta must be in (0,1]");
  if (gamma0 <= 0.0)
    throw InvalidArgument("signal_phase: gamma0 must be > 0");
  return -(delta0 / gamma0) * std::log(1.0 / eta);
}

double signal_phase(const AtomicParams& p, double omega0_sq, double length)
{
  const double eta = 1.0 - absorption_coefficient(p, omega0_sq) * length;
  return signal_phase(p.delta0, p.gamma0, eta);
}

double bias_stark_phase(const IntensityProfile& profile, double delta_eff, bool asymmetric)
{
  if (!asymmetric)
    return 0.0;
  if (delta_eff == 0.0)
    throw DivisionByZero("bias_stark_phase: delta_eff = 0");
  const auto f = profile.totals();
  return numerics::integrate_uniform(f, profile.step()) / delta_eff;
}

PropagationSolution propagate(const AtomicParams& p, double omega0_sq, double length,
                              const PropagationOptions& opt)
{
  PropagationSolution sol;
  sol.profile = propagate_intensity_ode(p, omega0_sq, length, opt);
  sol.eta = sol.profile.eta();
  sol.eta_analytic = 1.0 - absorption_coefficient(p, omega0_sq) * length;

  std::vector<double> sp(sol.profile.size()), sm(sol.profile.size());
  for (std::size_t k = 0; k < sp.size(); ++k) {
    sp[k] = p.delta_eff != 0.0 ? sol.profile.i_plus[k] / p.delta_eff : 0.0;
    sm[k] = p.delta_eff != 0.0 ? sol.profile.i_minus[k] / p.delta_eff : 0.0;
  }
  sol.phases = propagate_phases(p, sol.profile, sp, sm);
  sol.phi_sig = sol.phases.phi_plus.back() - sol.phases.phi_minus.back();
  sol.phi_bias = bias_stark_phase(sol.profile, p.delta_eff, false);
  return sol;
}

} // namespace magsim
