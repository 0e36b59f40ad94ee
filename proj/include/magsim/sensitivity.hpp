#pragma once

#include <span>
#include <string>
#include <vector>

#include "magsim/atomic.hpp"

namespace magsim {

struct DetectionResult {
  double mean_counts = 0.0;
  double count_variance = 0.0;
  double snr = 0.0;
};

enum class Regime { shot_limited, stark_limited, optimum };
std::string to_string(Regime r);

struct SensitivityPoint {
  double power_ratio = 0.0; // P / P0
  double rabi_sq = 0.0;     // |Omega(0)|^2 in units of gamma^2
  double n_in = 0.0;
  double min_delta0 = 0.0;  // SNR = 1, units of gamma
  double bracket = 1.0;     // count variance / shot noise
  Regime regime_tag = Regime::shot_limited;
};

struct SensitivityCurve {
  std::string label;
  double eta = 0.0; // 0 for the OPM comparison curve
  std::vector<SensitivityPoint> points;
};

/// <n> = eta n_in sin(phi_sig).
double faraday_counts(double eta, double n_in, double phi_sig);

/// <dn^2> = eta n_in + eta^2 n_in^2 <dphi^2>.
double count_variance(double eta, double n_in, double phase_var);

DetectionResult detection(double eta, double n_in, double phi_sig, double phase_var);

/// 1 + (|Omega(0)|^4 / Delta0^2 gamma0^2) eta (1 - eta) ln(1/eta).
double noise_bracket(const AtomicParams& p, double omega0_sq, double eta);

/// Closed-form SNR under linear absorption; carries the sign of delta0.
double snr(const AtomicParams& p, double omega0_sq, double eta, double n_in, double delta0);

/// Zeeman shift at which snr() = 1.
double min_detectable_shift(const AtomicParams& p, double omega0_sq, double eta, double n_in);

/// |Omega(0)|^2_opt = Delta0 gamma0 / sqrt(eta (1 - eta) ln(1/eta)).
double optimal_rabi_sq(const AtomicParams& p, double eta);

/// f = [(1 - eta) / (eta ln^3(1/eta))]^{1/4}.
double sql_factor_f(double eta);

/// f~ = [(1 - eta)(ln(1/eta) + eta - 1) / (eta ln^4(1/eta))]^{1/4}.
double sql_factor_f_tilde(double eta);

/// Root of ln(1/eta) = 3 (1 - eta) below eta = 1: the transmission minimizing f.
double optimal_eta(double tol = 1e-12);

/// delta0_SQL = gamma0 f(eta) [(gamma_r/Delta0)(3/8pi)(lambda^2/A)/(gamma0 t_m)]^{1/2}.
double sql_min_shift(const AtomicParams& p, double eta, double lambda_sq_over_A, double gamma0_tm);

/**
 * Input power in units of P0 = hbar nu0 (8 pi A / lambda^2) gamma0 and the
 * corresponding photon number in one measurement window:
 *   P/P0 = |Omega(0)|^2 / (3 gamma_r gamma0),  n_in = (P/P0) 8 pi gamma0 t_m / (lambda^2/A).
 */
struct PowerMapping {
  double gamma0_tm = 1e3;
  double lambda_sq_over_A = 1e-8;

  double rabi_sq(const AtomicParams& p, double power_ratio) const;
  double power_ratio(const AtomicParams& p, double rabi_sq) const;
  double photons(double power_ratio) const;
};

/// Delta omega_min(n) = chi_ratio^{-1} [1/n + beta^2 n]^{1/2}.
double generic_quantum_limit(double chi_ratio, double beta, double n_var);

struct QuantumLimitOptimum {
  bool interior = true; // false when beta = 0 (shot-noise-only, no finite optimum)
  double n_var_opt = 0.0;
  double delta_omega_min = 0.0;
};

/// Closed-form optimum n = 1/beta, Delta omega = chi_ratio^{-1} sqrt(2 beta).
QuantumLimitOptimum optimize_generic_quantum_limit(double chi_ratio, double beta);

/// Golden-section minimization in log(n) over [n_lo, n_hi].
QuantumLimitOptimum minimize_generic_quantum_limit(double chi_ratio, double beta, double n_lo,
                                                   double n_hi);

/**
 * Schematic optical-pumping magnetometer: delta_min = Gamma_eff / sqrt(n_in),
 * Gamma_eff = gamma0 + alpha sqrt(gamma0/gamma)|Omega| (+ |Omega|^2/Delta0 with
 * stark_term). Only the scaling of this model is meaningful.
 */
SensitivityCurve opm_sensitivity_curve(const AtomicParams& p, double alpha,
                                       std::span<const double> power_grid,
                                       const PowerMapping& map, bool stark_term = false);

/// EIT curves for each eta, OpenMP over (eta, power) pairs.
std::vector<SensitivityCurve> figure4_sweep(const AtomicParams& p, std::span<const double> eta_list,
                                            std::span<const double> power_grid,
                                            const PowerMapping& map);

/// Serial reference for figure4_sweep; bit-identical.
std::vector<SensitivityCurve> figure4_sweep_serial(const AtomicParams& p,
                                                   std::span<const double> eta_list,
                                                   std::span<const double> power_grid,
                                                   const PowerMapping& map);

/// n log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

} // namespace magsim
