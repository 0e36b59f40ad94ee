#include "magsim/stark_noise.hpp"

#include <cmath>

#include "magsim/errors.hpp"
#include "magsim/numerics.hpp"

namespace magsim {

StarkModel StarkModel::from_photon_number(double delta_eff, double length, double omega0_sq,
                                          double t_m, double n_in)
{
  if (!(n_in > 0.0) || !(t_m > 0.0))
    throw InvalidArgument("StarkModel: n_in and t_m must be > 0");
  return {delta_eff, length * omega0_sq * t_m / n_in};
}

double mean_stark_shift(const StarkModel& m, double omega_sq)
{
  if (m.delta_eff == 0.0)
    throw DivisionByZero("mean_stark_shift: delta_eff = 0");
  return omega_sq / (2.0 * m.delta_eff);
}

double resonance_shift(const StarkModel& m, double omega_sq)
{
  return 2.0 * mean_stark_shift(m, omega_sq);
}

double relative_shift_variance_density(const StarkModel& m, double omega_sq_at_z)
{
  if (!(omega_sq_at_z > 0.0))
    throw InvalidArgument("relative_shift_variance_density: intensity must be > 0");
  if (m.delta_eff == 0.0)
    throw DivisionByZero("relative_shift_variance_density: delta_eff = 0");
  return m.coupling_ratio / (4.0 * m.delta_eff * m.delta_eff * omega_sq_at_z);
}

namespace {

double inverse_intensity_integral(const IntensityProfile& profile, bool squeezed)
{
  const double i0 = profile.input();
  std::vector<double> f(profile.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double i = profile.total(k);
    if (!(i > 0.0))
      throw ProfileNonPositive("phase_variance: profile has a non-positive intensity sample");
    f[k] = squeezed ? (1.0 - i / i0) / i : 1.0 / i;
  }
  return numerics::integrate_uniform(f, profile.step());
}

double prefactor(const StarkModel& m, const AtomicParams& p)
{
  if (m.delta_eff == 0.0)
    throw DivisionByZero("phase_variance: delta_eff = 0");
  const double kg = p.kappa * p.gamma_r;
  return kg * kg / (4.0 * m.delta_eff * m.delta_eff);
}

} // namespace

double phase_variance(const StarkModel& m, const AtomicParams& p, const IntensityProfile& profile,
                      double t_m)
{
  if (!(t_m > 0.0))
    throw InvalidArgument("phase_variance: t_m must be > 0");
  if (std::isinf(m.delta_eff))
    return 0.0;
  return prefactor(m, p) * m.coupling_ratio * inverse_intensity_integral(profile, false) / t_m;
}

double phase_variance(const StarkModel& m, const AtomicParams& p, const IntensityProfile& profile,
                      double t_m, double n_in)
{
  const StarkModel full =
      StarkModel::from_photon_number(m.delta_eff, profile.length, profile.input(), t_m, n_in);
  return phase_variance(full, p, profile, t_m);
}

double phase_variance_squeezed(const StarkModel& m, const AtomicParams& p,
                               const IntensityProfile& profile, double t_m, double n_in)
{
  const StarkModel full =
      StarkModel::from_photon_number(m.delta_eff, profile.length, profile.input(), t_m, n_in);
  if (std::isinf(m.delta_eff))
    return 0.0;
  return prefactor(full, p) * full.coupling_ratio * inverse_intensity_integral(profile, true) /
         t_m;
}

NoiseBudget noise_budget(double eta, double n_in, double phase_var)
{
  if (phase_var < 0.0 || eta < 0.0 || n_in < 0.0)
    throw InvalidArgument("noise_budget: inputs must be >= 0");
  return {eta * n_in, eta * eta * n_in * n_in * phase_var, phase_var};
}

} // namespace magsim
