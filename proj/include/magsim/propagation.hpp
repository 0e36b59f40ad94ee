#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "magsim/atomic.hpp"

namespace magsim {

struct FieldState {
  cplx omega_plus{};
  cplx omega_minus{};
  double z = 0.0;

  double intensity() const { return std::norm(omega_plus) + std::norm(omega_minus); }

  // Linear input polarization split equally into the two circular components.
  static FieldState faraday(double omega0_sq)
  {
    const double a = std::sqrt(0.5 * omega0_sq);
    return {cplx(a, 0.0), cplx(a, 0.0), 0.0};
  }
};

/// Uniformly sampled |Omega_pm(z)|^2 on [0, length], steps + 1 nodes.
struct IntensityProfile {
  double length = 0.0;
  std::vector<double> z;
  std::vector<double> i_plus;
  std::vector<double> i_minus;

  std::size_t size() const { return z.size(); }
  double step() const { return z.size() > 1 ? length / static_cast<double>(z.size() - 1) : 0.0; }
  double total(std::size_t k) const { return i_plus[k] + i_minus[k]; }
  std::vector<double> totals() const;
  double input() const { return total(0); }
  double output() const { return total(size() - 1); }
  double eta() const { return output() / input(); }
};

struct PropagationOptions {
  std::size_t steps = 2048;
  double richardson_tol = 1e-8; // max relative deviation between N and 2N steps
};

/**
 * Fixed-step RK4 integration of
 *   d|Omega_pm|^2/dz = -kappa gamma0 gamma_r |Omega_+|^2 |Omega_-|^2 / (|Omega|^2 (2 gamma0 gamma + |Omega|^2))
 * starting from the Faraday split. The run is repeated with 2N steps and
 * StepTooCoarse is thrown if the two disagree beyond the tolerance.
 */
IntensityProfile propagate_intensity_ode(const AtomicParams& p, double omega0_sq, double length,
                                         const PropagationOptions& opt = {});

/// Same, for an arbitrary (asymmetric) input split.
IntensityProfile propagate_intensity_ode(const AtomicParams& p, const FieldState& input,
                                         double length, const PropagationOptions& opt = {});

/// Linear-absorption profile |Omega(z)|^2 = |Omega(0)|^2 (1 - (1 - eta) z / L), Faraday split.
IntensityProfile linear_profile(double omega0_sq, double eta, double length, std::size_t steps);

/// alpha_0 = gamma0 gamma_r kappa / (2 |Omega(0)|^2).
double absorption_coefficient(const AtomicParams& p, double omega0_sq);

/// Cell length giving transmission eta under linear absorption.
double length_for_eta_linear(const AtomicParams& p, double omega0_sq, double eta);

/// Cell length giving transmission eta under the full intensity equation (Faraday split),
/// from its implicit solution |Omega|^2 - |Omega(0)|^2 + 2 gamma gamma0 ln(|Omega|^2/|Omega(0)|^2) = -gamma0 gamma_r kappa z / 2.
double length_for_eta_exact(const AtomicParams& p, double omega0_sq, double eta);

struct Transmission {
  double eta_analytic = 1.0; // 1 - alpha_0 L, may be <= 0 outside validity
  double eta_ode = 1.0;
  bool valid = true;         // eta |Omega(0)|^2 >= 100 gamma gamma0
  double eta = 1.0;          // analytic when valid, ODE otherwise
  std::vector<std::string> warnings;
};

Transmission transmission(const AtomicParams& p, double omega0_sq, double length,
                          const PropagationOptions& opt = {});

struct PhaseProfile {
  std::vector<double> phi_plus;
  std::vector<double> phi_minus;
};

/**
 * Quadrature of
 *   dphi_pm/dz = (kappa gamma_r / 2 gamma) [Delta gamma0 -+ gamma (delta0/2 +- delta_pm)] / (2 gamma0 gamma + |Omega|^2)
 * on the profile nodes. stark_plus / stark_minus are the per-node level
 * shifts delta_pm(z); empty spans mean zero.
 */
PhaseProfile propagate_phases(const AtomicParams& p, const IntensityProfile& profile,
                              std::span<const double> stark_plus = {},
                              std::span<const double> stark_minus = {});

/// phi_sig = -(delta0/gamma0) ln(1/eta).
double signal_phase(double delta0, double gamma0, double eta);

/// Closed form with eta = 1 - alpha_0 L.
double signal_phase(const AtomicParams& p, double omega0_sq, double length);

/// int_0^L |Omega(z)|^2 / Delta0 dz; zero unless the configuration is asymmetric.
double bias_stark_phase(const IntensityProfile& profile, double delta_eff, bool asymmetric);

struct PropagationSolution {
  double eta = 1.0;
  double eta_analytic = 1.0;
  double phi_sig = 0.0;
  double phi_bias = 0.0;
  IntensityProfile profile;
  PhaseProfile phases;
};

/// Full Faraday-configuration run: ODE profile, phases with mean ac-Stark shifts, signal phase.
PropagationSolution propagate(const AtomicParams& p, double omega0_sq, double length,
                              const PropagationOptions& opt = {});

// ---------------------------------------------------------------------------
// Inhomogeneously broadened magnetic resonance

enum class AbsorptionKind { constant, linear, exponential };

struct AbsorptionModel {
  AbsorptionKind kind = AbsorptionKind::linear;
  double length = 1.0;
  double eta = 0.5;           // linear: output/input intensity
  double optical_depth = 1.0; // exponential: I(L) = I(0) exp(-optical_depth)

  double intensity(double omega0_sq, double z) const;
};

AbsorptionKind parse_absorption_kind(const std::string& name);
std::string to_string(AbsorptionKind kind);

/// int_0^L gamma0 / (gamma0^2 + (Delta + |Omega(z)|^2/Delta0)^2) dz at one detuning.
double lineshape_value(const AtomicParams& p, double omega0_sq, const AbsorptionModel& model,
                       double detuning);

/// Lineshape on a detuning grid, OpenMP over grid points.
std::vector<double> broadened_lineshape(const AtomicParams& p, double omega0_sq,
                                        std::span<const double> detuning_grid,
                                        const AbsorptionModel& model);

/// Serial reference for broadened_lineshape; results are bit-identical.
std::vector<double> broadened_lineshape_serial(const AtomicParams& p, double omega0_sq,
                                               std::span<const double> detuning_grid,
                                               const AbsorptionModel& model);

struct LineshapeWidth {
  double fwhm = 0.0;
  double center = 0.0;
  double peak = 0.0;
  double left = 0.0;
  double right = 0.0;
};

/**
 * Full width at half maximum. The peak is refined between grid nodes and the
 * half-maximum crossings are located by bisection on the lineshape itself.
 * Throws GridTooCoarse when the width spans fewer than 4 grid spacings or a
 * crossing lies outside the grid.
 */
LineshapeWidth lineshape_fwhm(const AtomicParams& p, double omega0_sq, const AbsorptionModel& model,
                              std::span<const double> detuning_grid, std::span<const double> values);

} // namespace magsim
