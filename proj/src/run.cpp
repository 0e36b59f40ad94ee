#include "magsim/run.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>

#include "magsim/csv.hpp"
#include "magsim/numerics.hpp"
#include "magsim/propagation.hpp"
#include "magsim/sensitivity.hpp"
#include "magsim/stark_noise.hpp"

#ifndef MAGSIM_VERSION
#define MAGSIM_VERSION "unknown"
#endif

namespace magsim {

std::string version_string() { return MAGSIM_VERSION; }

namespace {

namespace fs = std::filesystem;

std::string utc_timestamp()
{
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string short_number(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Collects the files of one run and their column documentation.
class Session {
public:
  Session(const RunConfig& cfg, std::ostream& log) : cfg_(cfg), log_(log), stamp_(utc_timestamp())
  {
    fs::create_directories(cfg.output_dir);
    for (const auto& w : validate(cfg.physics))
      warn(w);
  }

  void warn(const std::string& w)
  {
    log_ << "warning: " << w << '\n';
    out_.warnings.push_back(w);
  }

  std::unique_ptr<CsvWriter> open(const std::string& name, const std::string& description,
                                  std::vector<CsvColumn> columns,
                                  const std::vector<std::string>& notes = {})
  {
    std::vector<std::string> meta;
    meta.push_back("magsim " + version_string());
    meta.push_back("mode: " + cfg_.mode);
    meta.push_back("file: " + name);
    meta.push_back("description: " + description);
    meta.push_back("timestamp: " + stamp_);
    meta.push_back("seed: " + std::to_string(cfg_.mc_seed));
    for (const auto& n : notes)
      meta.push_back(n);
    for (const auto& w : out_.warnings)
      meta.push_back("warning: " + w);
    for (const auto& l : config_header_lines(cfg_))
      meta.push_back(l);
    schema_.push_back({name, description, columns, notes});
    const fs::path path = fs::path(cfg_.output_dir) / name;
    out_.files.push_back(path);
    return std::make_unique<CsvWriter>(path, meta, std::move(columns));
  }

  std::ostream& log() { return log_; }

  void write_gnuplot(const std::string& script)
  {
    if (!cfg_.output_gnuplot)
      return;
    const fs::path path = fs::path(cfg_.output_dir) / "plot.gp";
    std::ofstream gp(path, std::ios::binary);
    gp << "# gnuplot script written by magsim " << version_string() << " (mode " << cfg_.mode
       << ")\n"
       << "set datafile separator ','\nset datafile commentschars '#'\nset key autotitle columnhead\n"
       << script;
    out_.files.push_back(path);
  }

  RunOutput finish()
  {
    const fs::path path = fs::path(cfg_.output_dir) / "SCHEMA.md";
    std::ofstream md(path, std::ios::binary);
    md << "# magsim output schema (mode `" << cfg_.mode << "`)\n\n"
       << "Every CSV starts with `#` metadata lines: program version, mode, file name, "
       << "description, UTC timestamp, Monte-Carlo seed, and the full resolved configuration "
       << "as `#@ key = value` lines (readable back with `--config` after stripping the `#@ ` "
       << "prefix). The first non-comment line names the columns. Numbers carry 17 "
       << "significant digits. All rates are in units of gamma unless a column says otherwise.\n";
    for (const auto& f : schema_) {
      md << "\n## " << f.name << "\n\n" << f.description << "\n\n";
      for (const auto& n : f.notes)
        md << "- " << n << "\n";
      if (!f.notes.empty())
        md << "\n";
      md << "| column | meaning |\n|---|---|\n";
      for (const auto& c : f.columns)
        md << "| `" << c.name << "` | " << c.description << " |\n";
    }
    out_.files.push_back(path);
    return out_;
  }

private:
  struct SchemaEntry {
    std::string name;
    std::string description;
    std::vector<CsvColumn> columns;
    std::vector<std::string> notes;
  };
  const RunConfig& cfg_;
  std::ostream& log_;
  std::string stamp_;
  RunOutput out_;
  std::vector<SchemaEntry> schema_;
};

PropagationOptions prop_options(const RunConfig& cfg)
{
  return {cfg.z_steps, cfg.richardson_tol};
}

// ---------------------------------------------------------------------------

void run_figure4(const RunConfig& cfg, Session& s)
{
  const AtomicParams& p = cfg.physics;
  const auto curves = figure4_sweep(p, cfg.eta_list, cfg.power_grid, cfg.detection);
  const auto opm =
      opm_sensitivity_curve(p, cfg.opm_alpha, cfg.power_grid, cfg.detection, cfg.opm_stark_term);

  const std::vector<CsvColumn> cols = {
      {"power_ratio", "input power P/P0"},
      {"rabi_sq", "|Omega(0)|^2 / gamma^2"},
      {"n_in", "input photons per measurement time"},
      {"noise_factor", "EIT: count variance / shot noise; OPM: Gamma_eff / gamma0"},
      {"min_delta0_over_gamma0", "minimum detectable Zeeman shift (SNR = 1) / gamma0"},
      {"log10_power_ratio", "log10(P/P0)"},
      {"log10_min_delta0_over_gamma0", "log10 of the previous column"},
      {"regime", "shot_limited, stark_limited (OPM: broadening-limited) or optimum"}};

  auto emit = [&](const SensitivityCurve& c, const std::string& name, const std::string& desc,
                  const std::vector<std::string>& notes) {
    auto w = s.open(name, desc, cols, notes);
    for (const auto& pt : c.points) {
      const double m = pt.min_delta0 / p.gamma0;
      w->row({pt.power_ratio, pt.rabi_sq, pt.n_in, pt.bracket, m, std::log10(pt.power_ratio),
              std::log10(m), to_string(pt.regime_tag)});
    }
  };

  std::vector<std::string> names;
  for (const auto& c : curves) {
    const std::string name = "figure4_eit_eta_" + short_number(c.eta) + ".csv";
    names.push_back(name);
    emit(c, name, "EIT Faraday magnetometer sensitivity vs input power at eta = " +
                      short_number(c.eta),
         {"eta: " + format_double(c.eta)});
  }
  emit(opm, "figure4_opm.csv", "optical-pumping magnetometer overlay",
       {"model: schematic comparison; Gamma_eff = gamma0 + alpha sqrt(gamma0/gamma)|Omega|" +
            std::string(cfg.opm_stark_term ? " + |Omega|^2/Delta0" : "") +
            ", delta_min = Gamma_eff / sqrt(n_in)",
        "alpha: " + format_double(cfg.opm_alpha)});

  const double plateau = opm.points.back().min_delta0;
  auto w = s.open("figure4_summary.csv", "closed-form optimum of each EIT curve",
                  {{"eta", "transmission"},
                   {"f", "geometry factor f(eta)"},
                   {"rabi_opt_over_delta_eff_gamma0", "|Omega(0)|^2_opt / (Delta0 gamma0)"},
                   {"power_opt_ratio", "P_opt / P0"},
                   {"min_delta0_opt_over_gamma0", "SNR = 1 shift at the optimum / gamma0"},
                   {"sql_over_gamma0", "delta0_SQL / gamma0"},
                   {"grid_min_over_gamma0", "smallest value on the power grid / gamma0"},
                   {"opm_plateau_over_gamma0", "OPM value at the highest grid power / gamma0"},
                   {"opm_over_eit_optimum", "OPM plateau / EIT optimum"}});
  for (const auto& c : curves) {
    const double iopt = optimal_rabi_sq(p, c.eta);
    const double popt = cfg.detection.power_ratio(p, iopt);
    const double mopt = min_detectable_shift(p, iopt, c.eta, cfg.detection.photons(popt));
    double gmin = c.points.front().min_delta0;
    for (const auto& pt : c.points)
      gmin = std::min(gmin, pt.min_delta0);
    w->row({c.eta, sql_factor_f(c.eta), iopt / (p.delta_eff * p.gamma0), popt, mopt / p.gamma0,
            sql_min_shift(p, c.eta, cfg.detection.lambda_sq_over_A, cfg.detection.gamma0_tm) /
                p.gamma0,
            gmin / p.gamma0, plateau / p.gamma0, plateau / mopt});
    s.log() << "eta " << c.eta << ": optimum P/P0 = " << popt
            << ", min delta0/gamma0 = " << mopt / p.gamma0 << '\n';
  }

  std::string gp = "set logscale xy\nset xlabel 'P/P0'\nset ylabel 'delta0_min/gamma0'\nplot ";
  for (const auto& n : names)
    gp += "'" + n + "' using 1:5 with lines, ";
  gp += "'figure4_opm.csv' using 1:5 with lines dashtype 2\n";
  s.write_gnuplot(gp);
}

void run_lineshape(const RunConfig& cfg, Session& s)
{
  const AtomicParams& p = cfg.physics;
  AbsorptionModel model;
  model.kind = cfg.lineshape_model;
  model.length = 1.0;
  model.eta = cfg.lineshape_eta;
  model.optical_depth = cfg.lineshape_optical_depth;

  std::vector<double> rabi, fwhm, centers;
  std::vector<std::string> names;
  for (std::size_t k = 0; k < cfg.lineshape_power.size(); ++k) {
    const double i0 = cfg.lineshape_power[k] * p.delta_eff * p.gamma0;
    const double imin = model.intensity(i0, model.length);
    const double lo = -i0 / p.delta_eff - 20.0 * p.gamma0;
    const double hi = -imin / p.delta_eff + 20.0 * p.gamma0;
    std::vector<double> grid(cfg.lineshape_points);
    for (std::size_t j = 0; j < grid.size(); ++j)
      grid[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(grid.size() - 1);
    const auto values = broadened_lineshape(p, i0, grid, model);
    const auto width = lineshape_fwhm(p, i0, model, grid, values);
    rabi.push_back(i0);
    fwhm.push_back(width.fwhm);
    centers.push_back(width.center);

    const std::string name = "lineshape_" + std::to_string(k) + ".csv";
    names.push_back(name);
    auto w = s.open(name, "ac-Stark broadened magnetic resonance, |Omega(0)|^2 = " +
                              short_number(cfg.lineshape_power[k]) + " Delta0 gamma0",
                    {{"detuning_over_gamma0", "two-photon detuning / gamma0"},
                     {"lineshape", "int_0^L gamma0/(gamma0^2 + (Delta + |Omega(z)|^2/Delta0)^2) dz"},
                     {"lineshape_normalized", "lineshape * gamma0 / L (1 at an unshifted peak)"}},
                    {"absorption model: " + to_string(model.kind),
                     "rabi_sq: " + format_double(i0), "fwhm_over_gamma0: " +
                                                           format_double(width.fwhm / p.gamma0)});
    for (std::size_t j = 0; j < grid.size(); ++j)
      w->row({grid[j] / p.gamma0, values[j], values[j] * p.gamma0 / model.length});
  }

  std::vector<std::string> notes{"absorption model: " + to_string(model.kind)};
  if (rabi.size() >= 2) {
    std::vector<double> lx, lr, lf;
    for (std::size_t k = 0; k < rabi.size(); ++k) {
      lx.push_back(std::log(rabi[k]));
      lr.push_back(0.5 * std::log(rabi[k]));
      lf.push_back(std::log(fwhm[k]));
    }
    const double slope_i = numerics::fit_slope(lx, lf);
    const double slope_r = numerics::fit_slope(lr, lf);
    notes.push_back("loglog_slope_fwhm_vs_rabi_sq: " + format_double(slope_i));
    notes.push_back("loglog_slope_fwhm_vs_rabi: " + format_double(slope_r));
    s.log() << "FWHM log-log slope: " << slope_r << " vs |Omega(0)|, " << slope_i
            << " vs |Omega(0)|^2\n";
  }
  auto w = s.open("lineshape_fwhm.csv", "width and position of the broadened resonance",
                  {{"power_over_delta_eff_gamma0", "|Omega(0)|^2 / (Delta0 gamma0)"},
                   {"rabi_sq", "|Omega(0)|^2 / gamma^2"},
                   {"fwhm_over_gamma0", "full width at half maximum / gamma0"},
                   {"center_over_gamma0", "peak position / gamma0"}},
                  notes);
  for (std::size_t k = 0; k < rabi.size(); ++k)
    w->row({cfg.lineshape_power[k], rabi[k], fwhm[k] / p.gamma0, centers[k] / p.gamma0});

  std::string gp = "set xlabel 'Delta/gamma0'\nset ylabel 'normalized lineshape'\nplot ";
  for (std::size_t k = 0; k < names.size(); ++k)
    gp += (k ? ", " : "") + ("'" + names[k] + "' using 1:3 with lines");
  s.write_gnuplot(gp + "\n");
}

void run_snr_point(const RunConfig& cfg, Session& s)
{
  const AtomicParams& p = cfg.physics;
  const double eta = cfg.snr_eta;
  const double i0 = cfg.snr_rabi_sq > 0.0 ? cfg.snr_rabi_sq * p.delta_eff * p.gamma0
                                          : optimal_rabi_sq(p, eta);
  const double length = length_for_eta_exact(p, i0, eta);
  const auto sol = propagate(p, i0, length, prop_options(cfg));
  const auto trans = transmission(p, i0, length, prop_options(cfg));
  for (const auto& w : trans.warnings)
    s.warn(w);

  const double power = cfg.detection.power_ratio(p, i0);
  const double n_in = cfg.detection.photons(power);
  const double t_m = cfg.detection.gamma0_tm / p.gamma0;
  const StarkModel model{p.delta_eff, 0.0};
  const double var_quad = phase_variance(model, p, sol.profile, t_m, n_in);
  const double var_sq = phase_variance_squeezed(model, p, sol.profile, t_m, n_in);
  const double r = i0 / (p.delta_eff * p.gamma0);
  const double var_closed = r * r * (1.0 - eta) * std::log(1.0 / eta) / n_in;
  const double phi_closed = signal_phase(p.delta0, p.gamma0, eta);
  const auto det = detection(sol.eta, n_in, sol.phi_sig, var_quad);
  const double snr_closed = snr(p, i0, eta, n_in, p.delta0);
  const double dmin = min_detectable_shift(p, i0, eta, n_in);
  const double sql = sql_min_shift(p, eta, cfg.detection.lambda_sq_over_A, cfg.detection.gamma0_tm);

  auto w = s.open(
      "snr_point.csv", "single operating point: propagation, noise budget and SNR",
      {{"eta", "target transmission"},
       {"rabi_sq", "|Omega(0)|^2 / gamma^2"},
       {"rabi_over_delta_eff_gamma0", "|Omega(0)|^2 / (Delta0 gamma0)"},
       {"power_ratio", "P/P0"},
       {"n_in", "input photons per measurement time"},
       {"length", "cell length in 1/kappa (full intensity equation reaches eta)"},
       {"eta_ode", "transmission of the RK4 profile"},
       {"eta_linear", "1 - alpha0 L"},
       {"phi_sig_quadrature", "phi_+(L) - phi_-(L) on the ODE profile [rad]"},
       {"phi_sig_closed", "-(delta0/gamma0) ln(1/eta) [rad]"},
       {"phase_var_quadrature", "<dphi^2> from the profile integral [rad^2]"},
       {"phase_var_closed", "<dphi^2> on the linear profile [rad^2]"},
       {"phase_var_squeezed", "<dphi^2> with squeezed input [rad^2]"},
       {"shot_term", "eta n_in"},
       {"stark_term", "eta^2 n_in^2 <dphi^2>"},
       {"snr_pipeline", "<n>/sqrt(<dn^2>) from the propagated quantities"},
       {"snr_closed", "closed-form SNR"},
       {"min_delta0_over_gamma0", "SNR = 1 shift / gamma0"},
       {"sql_over_gamma0", "delta0_SQL / gamma0"}},
      {"delta0_over_gamma0: " + format_double(cfg.delta0_over_gamma0)});
  const auto budget = noise_budget(sol.eta, n_in, var_quad);
  w->row({eta, i0, r, power, n_in, length, sol.eta, sol.eta_analytic, sol.phi_sig, phi_closed,
          var_quad, var_closed, var_sq, budget.shot_term, budget.stark_term, det.snr, snr_closed,
          dmin / p.gamma0, sql / p.gamma0});

  auto prof = s.open("snr_profile.csv", "intensity and phases along the cell",
                     {{"z", "position in 1/kappa"},
                      {"rabi_sq", "|Omega(z)|^2 from RK4"},
                      {"rabi_sq_linear", "|Omega(0)|^2 (1 - alpha0 z)"},
                      {"phi_plus", "phase of Omega_+ [rad]"},
                      {"phi_minus", "phase of Omega_- [rad]"}});
  const double a0 = absorption_coefficient(p, i0);
  for (std::size_t k = 0; k < sol.profile.size(); ++k)
    prof->row({sol.profile.z[k], sol.profile.total(k), i0 * (1.0 - a0 * sol.profile.z[k]),
               sol.phases.phi_plus[k], sol.phases.phi_minus[k]});
  s.log() << "snr_point: eta_ode = " << sol.eta << ", phi_sig = " << sol.phi_sig
          << ", SNR = " << det.snr << " (closed form " << snr_closed << ")\n";
  s.write_gnuplot("set xlabel 'z kappa'\nset ylabel '|Omega|^2'\n"
                  "plot 'snr_profile.csv' using 1:2 with lines, '' using 1:3 with lines\n");
}

void run_sql_table(const RunConfig& cfg, Session& s)
{
  const AtomicParams& p = cfg.physics;
  const double eta_star = optimal_eta();
  auto w = s.open("sql_table.csv", "standard quantum limit and geometry factors vs transmission",
                  {{"eta", "transmission"},
                   {"f", "[(1-eta)/(eta ln^3(1/eta))]^(1/4)"},
                   {"f_tilde", "squeezed-input factor"},
                   {"f_tilde_over_f", "ratio of the two factors"},
                   {"rabi_opt_over_delta_eff_gamma0", "|Omega(0)|^2_opt / (Delta0 gamma0)"},
                   {"power_opt_ratio", "P_opt / P0"},
                   {"sql_over_gamma0", "delta0_SQL / gamma0"},
                   {"pipeline_min_over_gamma0", "SNR = 1 shift at the optimum / gamma0"},
                   {"pipeline_over_sql", "previous column / delta0_SQL"}},
                  {"eta_star: " + format_double(eta_star) + " (root of ln(1/eta) = 3(1-eta))",
                   "f_at_eta_star: " + format_double(sql_factor_f(eta_star))});
  for (double eta : cfg.sql_eta) {
    const double iopt = optimal_rabi_sq(p, eta);
    const double popt = cfg.detection.power_ratio(p, iopt);
    const double sql = sql_min_shift(p, eta, cfg.detection.lambda_sq_over_A, cfg.detection.gamma0_tm);
    const double pipe = min_detectable_shift(p, iopt, eta, cfg.detection.photons(popt));
    w->row({eta, sql_factor_f(eta), sql_factor_f_tilde(eta),
            sql_factor_f_tilde(eta) / sql_factor_f(eta), iopt / (p.delta_eff * p.gamma0), popt,
            sql / p.gamma0, pipe / p.gamma0, pipe / sql});
  }
  s.log() << "sql_table: eta* = " << eta_star << ", f(eta*) = " << sql_factor_f(eta_star) << '\n';
  s.write_gnuplot("set logscale x\nset xlabel 'eta'\n"
                  "plot 'sql_table.csv' using 1:2 with linespoints, '' using 1:3 with linespoints\n");
}

void run_mc_validate(const RunConfig& cfg, Session& s)
{
  const AtomicParams& p = cfg.physics;
  const double eta = cfg.mc_eta;
  const double i0 =
      cfg.mc_rabi_sq > 0.0 ? cfg.mc_rabi_sq * p.delta_eff * p.gamma0 : optimal_rabi_sq(p, eta);
  const double length = length_for_eta_exact(p, i0, eta);
  const auto profile = propagate_intensity_ode(p, i0, length, {cfg.mc_z_cells, cfg.richardson_tol});
  const StarkModel model{p.delta_eff, 0.0};

  McOptions opt;
  opt.samples = cfg.mc_samples;
  opt.seed = cfg.mc_seed;
  const auto plain = montecarlo_stark_oracle(model, p, profile, cfg.mc_n_in, opt);
  McOptions noisy = opt;
  noisy.common_mode = cfg.mc_common_mode;
  noisy.seed = cfg.mc_seed + 1;
  const auto classical = montecarlo_stark_oracle(model, p, profile, cfg.mc_n_in, noisy);

  auto w = s.open("mc_validate.csv", "Monte-Carlo check of the ac-Stark phase-noise formulas",
                  {{"quantity", "what is compared"},
                   {"analytic", "analytic value"},
                   {"empirical", "Monte-Carlo estimate"},
                   {"std_error", "standard error of the estimate"},
                   {"z_score", "(empirical - analytic) / std_error"},
                   {"relative_deviation", "empirical / analytic - 1 (0 when analytic is 0)"}},
                  {"samples: " + std::to_string(cfg.mc_samples),
                   "z_cells: " + std::to_string(cfg.mc_z_cells),
                   "common_mode_seed: " + std::to_string(noisy.seed),
                   "common_mode_amplitude: " + format_double(cfg.mc_common_mode),
                   "eta_ode: " + format_double(profile.eta()),
                   "rabi_sq: " + format_double(i0), "n_in: " + format_double(cfg.mc_n_in)});
  auto row = [&](const std::string& q, double a, double e, double se) {
    w->row({q, a, e, se, se > 0.0 ? (e - a) / se : 0.0, a != 0.0 ? e / a - 1.0 : 0.0});
  };
  row("phase_mean", 0.0, plain.phase.mean, plain.phase.std_error_mean);
  row("phase_variance", plain.analytic_phase_variance, plain.phase.variance,
      plain.phase.std_error_variance);
  row("relative_variance_discrete", plain.discrete_relative_variance, plain.relative.variance,
      plain.relative.std_error_variance);
  row("relative_variance_with_common_mode", plain.analytic_relative_variance,
      classical.relative.variance, classical.relative.std_error_variance);
  row("relative_variance_change", 0.0, classical.relative.variance - plain.relative.variance,
      std::hypot(plain.relative.std_error_variance, classical.relative.std_error_variance));
  row("common_variance", plain.discrete_common_variance, plain.common.variance,
      plain.common.std_error_variance);
  row("common_variance_with_common_mode", classical.discrete_common_variance,
      classical.common.variance, classical.common.std_error_variance);

  s.log() << "mc_validate: <dphi^2> = " << plain.phase.variance << " +- "
          << plain.phase.std_error_variance << " (analytic " << plain.analytic_phase_variance
          << ")\n";
}

void run_quantum_limit(const RunConfig& cfg, Session& s)
{
  const double chi = cfg.ql_chi_ratio;
  std::vector<std::string> names;
  for (std::size_t k = 0; k < cfg.ql_beta.size(); ++k) {
    const double beta = cfg.ql_beta[k];
    const double centre = beta > 0.0 ? 1.0 / beta : 1e6;
    const auto grid = log_grid(centre * 1e-3, centre * 1e3, cfg.ql_points);
    const std::string name = "quantum_limit_" + std::to_string(k) + ".csv";
    names.push_back(name);
    auto w = s.open(name, "generic phase-detection limit vs photon-number variance, beta = " +
                              short_number(beta),
                    {{"n_var", "photon-number variance"},
                     {"delta_omega", "chi_ratio^-1 sqrt(1/n + beta^2 n), units of gamma"},
                     {"shot_part", "chi_ratio^-1 / sqrt(n)"},
                     {"coupling_part", "chi_ratio^-1 beta sqrt(n)"}},
                    {"beta: " + format_double(beta), "chi_ratio: " + format_double(chi)});
    for (double n : grid)
      w->row({n, generic_quantum_limit(chi, beta, n), 1.0 / (chi * std::sqrt(n)),
              beta * std::sqrt(n) / chi});
  }

  auto w = s.open("quantum_limit_summary.csv", "closed-form vs numerical optimum",
                  {{"beta", "intensity-phase coupling"},
                   {"interior", "1 if a finite optimum exists (beta > 0)"},
                   {"n_opt_closed", "1/beta"},
                   {"n_opt_numeric", "golden-section minimizer"},
                   {"delta_omega_closed", "chi_ratio^-1 sqrt(2 beta)"},
                   {"delta_omega_numeric", "value at the numerical minimizer"},
                   {"n_opt_rel_error", "relative error of the minimizer"},
                   {"delta_omega_rel_error", "relative error of the minimum"}});
  for (double beta : cfg.ql_beta) {
    const auto closed = optimize_generic_quantum_limit(chi, beta);
    const double centre = beta > 0.0 ? 1.0 / beta : 1e6;
    const auto num = minimize_generic_quantum_limit(chi, beta, centre * 1e-6, centre * 1e6);
    const double nerr = closed.interior ? num.n_var_opt / closed.n_var_opt - 1.0 : 0.0;
    const double derr = closed.interior ? num.delta_omega_min / closed.delta_omega_min - 1.0 : 0.0;
    w->row({beta, closed.interior ? 1.0 : 0.0, closed.n_var_opt, num.n_var_opt,
            closed.delta_omega_min, num.delta_omega_min, nerr, derr});
  }

  // The EIT magnetometer in the same language: n_var = eta n_in, chi = ln(1/eta)/gamma0,
  // beta = sqrt(bracket - 1)/(eta n_in), which is independent of power since n_in ~ |Omega(0)|^2.
  const AtomicParams& p = cfg.physics;
  auto e = s.open("quantum_limit_eit.csv", "EIT model mapped onto the generic limit",
                  {{"eta", "transmission"},
                   {"chi_ratio", "ln(1/eta)/gamma0"},
                   {"beta", "intensity-phase coupling of the EIT model"},
                   {"generic_min_over_gamma0", "chi_ratio^-1 sqrt(2 beta) / gamma0"},
                   {"sql_over_gamma0", "delta0_SQL / gamma0"},
                   {"generic_over_sql", "ratio; differs from 1 by the factor-2 noise bracket"}});
  for (double eta : cfg.eta_list) {
    const double iopt = optimal_rabi_sq(p, eta);
    const double n_in = cfg.detection.photons(cfg.detection.power_ratio(p, iopt));
    const double chi_eit = std::log(1.0 / eta) / p.gamma0;
    const double beta = std::sqrt(noise_bracket(p, iopt, eta) - 1.0) / (eta * n_in);
    const double g = optimize_generic_quantum_limit(chi_eit, beta).delta_omega_min;
    const double sql = sql_min_shift(p, eta, cfg.detection.lambda_sq_over_A, cfg.detection.gamma0_tm);
    e->row({eta, chi_eit, beta, g / p.gamma0, sql / p.gamma0, g / sql});
  }

  std::string gp = "set logscale xy\nset xlabel 'n_var'\nset ylabel 'Delta omega_min'\nplot ";
  for (std::size_t k = 0; k < names.size(); ++k)
    gp += (k ? ", " : "") + ("'" + names[k] + "' using 1:2 with lines");
  s.write_gnuplot(gp + "\n");
}

} // namespace

RunOutput run(const RunConfig& cfg, std::ostream& log)
{
  Session s(cfg, log);
  if (cfg.mode == "figure4")
    run_figure4(cfg, s);
  else if (cfg.mode == "lineshape")
    run_lineshape(cfg, s);
  else if (cfg.mode == "snr_point")
    run_snr_point(cfg, s);
  else if (cfg.mode == "sql_table")
    run_sql_table(cfg, s);
  else if (cfg.mode == "mc_validate")
    run_mc_validate(cfg, s);
  else if (cfg.mode == "quantum_limit")
    run_quantum_limit(cfg, s);
  else
    throw ConfigError("mode", "unknown mode '" + cfg.mode + "'");
  return s.finish();
}

} // namespace magsim
