#pragma once

#include <cstddef>
#include <cstdint>

#include "magsim/atomic.hpp"
#include "magsim/propagation.hpp"

namespace magsim {

/**
 * ac-Stark coupling of the light to the far-detuned levels.
 *
 * coupling_ratio stands for wp^2 L / (hbar^2 C). It is never set from SI
 * constants; from_photon_number() eliminates it through
 * wp^2 |Omega(0)|^2 / (hbar^2 C t_m) = |Omega(0)|^4 / n_in.
 */
struct StarkModel {
  double delta_eff = 1e3;
  double coupling_ratio = 0.0;

  static StarkModel from_photon_number(double delta_eff, double length, double omega0_sq,
                                       double t_m, double n_in);
};

struct NoiseBudget {
  double shot_term = 0.0;  // eta n_in
  double stark_term = 0.0; // eta^2 n_in^2 <dphi^2>
  double phase_variance = 0.0;
  double total() const { return shot_term + stark_term; }
};

/// Mean shift of each circular component at equal splitting, |Omega|^2 / (2 Delta0).
double mean_stark_shift(const StarkModel& m, double omega_sq);

/// Shift of the magnetic resonance for the total field, |Omega|^2 / Delta0 (twice the per-component value).
double resonance_shift(const StarkModel& m, double omega_sq);

/**
 * White-noise density of the symmetrized relative shift (delta_+ - delta_-)/(2|Omega|^2),
 * wp^2 L / (4 hbar^2 C Delta0^2 |Omega(z)|^2). Only the vacuum term remains:
 * classical intensity noise common to both components cancels.
 */
double relative_shift_variance_density(const StarkModel& m, double omega_sq_at_z);

/// <dphi^2> = (1/t_m) (kappa^2 gamma_r^2 / 4 Delta0^2) coupling_ratio int_0^L dz / |Omega(z)|^2.
double phase_variance(const StarkModel& m, const AtomicParams& p, const IntensityProfile& profile,
                      double t_m);

/// Same with the coupling eliminated through n_in (t_m cancels).
double phase_variance(const StarkModel& m, const AtomicParams& p, const IntensityProfile& profile,
                      double t_m, double n_in);

/// Squeezed input: integrand weighted by 1 - eta(z), eta(z) = |Omega(z)|^2 / |Omega(0)|^2.
double phase_variance_squeezed(const StarkModel& m, const AtomicParams& p,
                               const IntensityProfile& profile, double t_m, double n_in);

NoiseBudget noise_budget(double eta, double n_in, double phase_var);

// ---------------------------------------------------------------------------
// Monte-Carlo oracle

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0; // unbiased
  double std_error_mean = 0.0;
  double std_error_variance = 0.0;
};

struct McOptions {
  std::size_t samples = 1000000;
  std::uint64_t seed = 12345;
  double common_mode = 0.0;  // classical noise amplitude in units of the shot-noise amplitude
  std::size_t block = 4096;  // samples per independent block
};

struct McResult {
  Moments phase;           // delta phi = -kappa gamma_r int (delta_+ - delta_-)/(2|Omega|^2) dz
  Moments relative;        // int (delta_+ - delta_-)/(2|Omega|^2) dz
  Moments common;          // int (delta_+ + delta_-)/(2|Omega|^2) dz, minus its mean
  double analytic_phase_variance = 0.0;
  double analytic_relative_variance = 0.0;
  // Exact expectations of the sampled (trapezoid-discretized) functionals.
  double discrete_relative_variance = 0.0;
  double discrete_common_variance = 0.0;
};

/**
 * Samples shot-noise-limited photon numbers per profile cell for both
 * circular components (optionally with a classical fluctuation shared by
 * both), converts them to ac-Stark shifts and accumulates the phase noise.
 * Blocks run in parallel and are merged in block order, so the result does
 * not depend on the thread count.
 */
McResult montecarlo_stark_oracle(const StarkModel& m, const AtomicParams& p,
                                 const IntensityProfile& profile, double n_in,
                                 const McOptions& opt);

/// Single-threaded reference; bit-identical to montecarlo_stark_oracle.
McResult montecarlo_stark_oracle_serial(const StarkModel& m, const AtomicParams& p,
                                        const IntensityProfile& profile, double n_in,
                                        const McOptions& opt);

} // namespace magsim
