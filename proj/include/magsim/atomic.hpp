#pragma once

#include <complex>
#include <string>
#include <vector>

namespace magsim {

using cplx = std::complex<double>;

/**
 * Rates and detunings of the Lambda system |b-> , |b+> <-> |a>.
 *
 * Everything is dimensionless: rates in units of gamma, lengths in units
 * of 1/kappa. gamma is kept as a field so formulas read naturally, but the
 * CLI always sets it to 1.
 */
struct AtomicParams {
  double gamma = 1.0;     // optical coherence decay
  double gamma_r = 1.0;   // radiative rate per branch |a> -> |b+-|
  double gamma0 = 1e-4;   // ground-state coherence decay
  double gamma0_r = 0.0;  // ground-state population exchange
  double delta_big = 0.0; // one-photon detuning
  double delta0 = 0.0;    // Zeeman splitting of |b+-|
  double delta_eff = 1e3; // detuning of the non-resonant levels (ac-Stark scale)
  double kappa = 1.0;     // absorption scale
};

// Throws InvalidArgument on hard violations, returns soft model-validity warnings.
std::vector<std::string> validate(const AtomicParams& p);

/**
 * Steady-state atomic response.
 *
 * Optical coherences are stored in the propagation convention, i.e. the
 * source term in dOmega_pm/dz = i (kappa gamma_r / 2) sigma_ab_pm. In this
 * convention Im(conj(Omega) sigma) > 0 means absorption.
 */
struct ComplexCoherences {
  cplx sigma_ab_plus{};
  cplx sigma_ab_minus{};
  cplx sigma_bmbp{};
  double pop_bm = 0.0;
  double pop_bp = 0.0;
  double pop_a = 0.0;
};

/// Gamma_{a b+-} = gamma + gamma0_r/2 + i(Delta + delta_pm +- delta0/2); sign is +1 or -1.
cplx gamma_ab(const AtomicParams& p, int sign, double stark_shift);

/// Gamma_{b- b+} = gamma0 + gamma0_r + i(delta0 + delta_+ - delta_-).
cplx gamma_ground(const AtomicParams& p, double stark_plus, double stark_minus);

/**
 * Exact steady state of the c-number Bloch equations.
 *
 * The 8 real unknowns (sigma_b-b-, sigma_b+b+, Re/Im sigma_ab+, Re/Im sigma_ab-,
 * Re/Im sigma_b-b+) are solved by a dense factorization; sigma_aa follows from
 * the trace. Throws SingularSystem when the condition number exceeds 1e12.
 */
ComplexCoherences solve_bloch_exact(const AtomicParams& p, cplx omega_plus, cplx omega_minus,
                                    double stark_plus = 0.0, double stark_minus = 0.0);

/// Condition number of the 8x8 steady-state system (diagnostics and tests).
double bloch_condition_number(const AtomicParams& p, cplx omega_plus, cplx omega_minus,
                              double stark_plus = 0.0, double stark_minus = 0.0);

/**
 * Lowest-order closed form for sigma_ab+- (absorption, two-photon dispersion
 * and one-photon detuning terms). Ground populations and sigma_b-b+ take the
 * dark-state values; sigma_aa follows from the excited-state balance.
 * Throws DivisionByZero when |Omega|^2 = 0.
 */
ComplexCoherences solve_bloch_perturbative(const AtomicParams& p, cplx omega_plus,
                                           cplx omega_minus, double stark_plus = 0.0,
                                           double stark_minus = 0.0);

/**
 * Weak-probe susceptibility under a strong drive at one-photon resonance.
 *
 *   chi = gamma_r (-delta + i gamma0) / (|Omega_d|^2 + gamma gamma0)
 *
 * normalized so that a weak probe obeys dOmega_p/dz = (i kappa / 2) chi Omega_p,
 * i.e. intensity attenuation kappa chi'' matches the intensity equation of
 * the propagation module for |Omega_d|^2 >> gamma gamma0.
 */
cplx eit_susceptibility(const AtomicParams& p, cplx omega_drive, double two_photon_detuning);

/// Gamma_eff = gamma0 + alpha sqrt(gamma0/gamma) |Omega|.
double power_broadened_width(const AtomicParams& p, double omega, double alpha);

} // namespace magsim
