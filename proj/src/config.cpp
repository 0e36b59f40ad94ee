#include "magsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace magsim {

const std::vector<ConfigKey>& config_keys()
{
  static const std::vector<ConfigKey> keys = {
      {"physics.gamma0", "1e-4", "ground-state coherence decay gamma0/gamma"},
      {"physics.gamma0_r", "0", "ground-state population exchange gamma0r/gamma"},
      {"physics.gamma_r", "1", "radiative rate per branch gamma_r/gamma"},
      {"physics.delta_eff", "1e3", "ac-Stark detuning Delta0/gamma"},
      {"physics.delta_big", "0", "one-photon detuning Delta/gamma"},
      {"physics.delta0_over_gamma0", "1e-2", "Zeeman splitting delta0/gamma0 (signal runs)"},
      {"physics.kappa", "1", "absorption scale (lengths are in 1/kappa)"},
      {"geometry.eta", "0.8,0.1,0.01", "transmission targets for figure4"},
      {"geometry.z_steps", "2048", "RK4 steps along the cell"},
      {"geometry.richardson_tol", "1e-8", "allowed N vs 2N step deviation"},
      {"detection.gamma0_tm", "1e3", "measurement time gamma0 t_m"},
      {"detection.lambda_sq_over_A", "1e-8", "lambda^2 / beam area"},
      {"detection.power_grid", "log:1e-2:1e7:181", "P/P0 values: log:lo:hi:n or a list"},
      {"opm.alpha", "1", "power-broadening prefactor of the OPM width"},
      {"opm.stark_term", "false", "add |Omega|^2/Delta0 to the OPM width"},
      {"lineshape.model", "linear", "absorption model: constant, linear, exponential"},
      {"lineshape.eta", "0.5", "transmission of the linear model"},
      {"lineshape.optical_depth", "1", "optical depth of the exponential model"},
      {"lineshape.power", "10,100,1000", "|Omega(0)|^2 in units of Delta0 gamma0"},
      {"lineshape.detuning_points", "4096", "detuning grid size"},
      {"snr.eta", "0.06", "transmission for snr_point"},
      {"snr.rabi_sq", "opt", "|Omega(0)|^2 / (Delta0 gamma0), or opt"},
      {"sql.eta", "0.01,0.02,0.04,0.06,0.1,0.2,0.4,0.6,0.8", "transmissions for sql_table"},
      {"mc.samples", "1000000", "Monte-Carlo samples"},
      {"mc.seed", "12345", "Monte-Carlo seed"},
      {"mc.z_cells", "64", "cells along z for the Monte-Carlo"},
      {"mc.common_mode", "10", "classical common-mode noise / shot-noise amplitude"},
      {"mc.eta", "0.1", "transmission for mc_validate"},
      {"mc.rabi_sq", "opt", "|Omega(0)|^2 / (Delta0 gamma0), or opt"},
      {"mc.n_in", "1e10", "input photon number per measurement"},
      {"ql.chi_ratio", "1e4", "(1/chi'') dchi'/domega in units of 1/gamma"},
      {"ql.beta", "1e-6,1e-3,1e-1", "intensity-phase coupling values"},
      {"ql.n_points", "241", "points per Delta omega(n) curve"},
      {"output.dir", "magsim_out", "output directory"},
      {"output.gnuplot", "true", "write a gnuplot script next to the CSVs"},
  };
  return keys;
}

const std::vector<std::string>& run_modes()
{
  static const std::vector<std::string> modes = {"figure4",     "lineshape",    "snr_point",
                                                 "sql_table",   "mc_validate",  "quantum_limit"};
  return modes;
}

namespace {

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool known_key(const std::string& key)
{
  const auto& keys = config_keys();
  return std::any_of(keys.begin(), keys.end(), [&](const ConfigKey& k) { return key == k.key; });
}

double to_double(const std::string& key, const std::string& text)
{
  const std::string t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+')
    ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ConfigError(key, "'" + text + "' is not a finite number");
  return v;
}

std::size_t to_count(const std::string& key, const std::string& text)
{
  const double v = to_double(key, text);
  if (v < 1.0 || v != std::floor(v) || v > 9.0e15)
    throw ConfigError(key, "'" + text + "' is not a positive integer");
  return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& key, const std::string& text)
{
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on")
    return true;
  if (t == "false" || t == "0" || t == "no" || t == "off")
    return false;
  throw ConfigError(key, "'" + text + "' is not a boolean");
}

std::vector<double> to_list(const std::string& key, const std::string& text)
{
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(to_double(key, item));
  if (out.empty())
    throw ConfigError(key, "list is empty");
  return out;
}

double positive(const std::string& key, double v)
{
  if (!(v > 0.0))
    throw ConfigError(key, "must be > 0");
  return v;
}

double open_unit(const std::string& key, double v)
{
  if (!(v > 0.0) || !(v < 1.0))
    throw ConfigError(key, "transmission must lie strictly between 0 and 1");
  return v;
}

double rabi_or_opt(const std::string& key, const std::string& text)
{
  if (trim(text) == "opt")
    return 0.0;
  return positive(key, to_double(key, text));
}

} // namespace

std::vector<double> parse_grid(const std::string& key, const std::string& text)
{
  const std::string t = trim(text);
  if (t.empty())
    throw ConfigError(key, "grid is empty");
  if (t.rfind("log:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(t.substr(4));
    std::string item;
    while (std::getline(ss, item, ':'))
      parts.push_back(item);
    if (parts.size() != 3)
      throw ConfigError(key, "expected log:lo:hi:n");
    const double lo = positive(key, to_double(key, parts[0]));
    const double hi = positive(key, to_double(key, parts[1]));
    const std::size_t n = to_count(key, parts[2]);
    if (hi < lo)
      throw ConfigError(key, "upper end below lower end");
    return log_grid(lo, hi, n);
  }
  auto v = to_list(key, t);
  for (double x : v)
    positive(key, x);
  return v;
}

std::map<std::string, std::string> parse_config_text(std::istream& in, const std::string& origin)
{
  std::map<std::string, std::string> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << origin << ":" << lineno << ": expected 'key = value'";
      throw ConfigError(line, os.str());
    }
    const std::string key = trim(line.substr(0, eq));
    if (!known_key(key))
      throw ConfigError(key, "unknown key (" + origin + ":" + std::to_string(lineno) + ")");
    values[key] = trim(line.substr(eq + 1));
  }
  return values;
}

void apply_override(std::map<std::string, std::string>& values, const std::string& assignment)
{
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError(assignment, "--set expects key=value");
  const std::string key = trim(assignment.substr(0, eq));
  if (!known_key(key))
    throw ConfigError(key, "unknown key");
  values[key] = trim(assignment.substr(eq + 1));
}

RunConfig resolve_config(const std::string& mode, const std::map<std::string, std::string>& file_values,
                         const std::vector<std::string>& overrides)
{
  std::map<std::string, std::string> values;
  for (const auto& k : config_keys())
    values[k.key] = k.default_value;
  for (const auto& [k, v] : file_values) {
    if (!known_key(k))
      throw ConfigError(k, "unknown key");
    values[k] = v;
  }
  for (const auto& o : overrides)
    apply_override(values, o);
  return build_config(mode, std::move(values));
}

RunConfig build_config(const std::string& mode, std::map<std::string, std::string> values)
{
  const auto& modes = run_modes();
  if (std::find(modes.begin(), modes.end(), mode) == modes.end())
    throw ConfigError("mode", "unknown mode '" + mode + "'");
  for (const auto& k : config_keys())
    if (!values.count(k.key))
      values[k.key] = k.default_value;

  RunConfig c;
  c.mode = mode;
  auto get = [&](const char* key) -> const std::string& { return values.at(key); };
  auto num = [&](const char* key) { return to_double(key, get(key)); };

  c.physics.gamma = 1.0;
  c.physics.gamma0 = positive("physics.gamma0", num("physics.gamma0"));
  c.physics.gamma0_r = num("physics.gamma0_r");
  if (c.physics.gamma0_r < 0.0)
    throw ConfigError("physics.gamma0_r", "must be >= 0");
  c.physics.gamma_r = positive("physics.gamma_r", num("physics.gamma_r"));
  c.physics.delta_eff = positive("physics.delta_eff", num("physics.delta_eff"));
  c.physics.delta_big = num("physics.delta_big");
  c.delta0_over_gamma0 = num("physics.delta0_over_gamma0");
  c.physics.delta0 = c.delta0_over_gamma0 * c.physics.gamma0;
  c.physics.kappa = positive("physics.kappa", num("physics.kappa"));

  c.eta_list = to_list("geometry.eta", get("geometry.eta"));
  for (double e : c.eta_list)
    open_unit("geometry.eta", e);
  c.z_steps = to_count("geometry.z_steps", get("geometry.z_steps"));
  if (c.z_steps < 2)
    throw ConfigError("geometry.z_steps", "need at least 2 steps");
  c.richardson_tol = positive("geometry.richardson_tol", num("geometry.richardson_tol"));

  c.detection.gamma0_tm = positive("detection.gamma0_tm", num("detection.gamma0_tm"));
  c.detection.lambda_sq_over_A =
      positive("detection.lambda_sq_over_A", num("detection.lambda_sq_over_A"));
  c.power_grid = parse_grid("detection.power_grid", get("detection.power_grid"));

  c.opm_alpha = positive("opm.alpha", num("opm.alpha"));
  c.opm_stark_term = to_bool("opm.stark_term", get("opm.stark_term"));

  try {
    c.lineshape_model = parse_absorption_kind(trim(get("lineshape.model")));
  } catch (const InvalidArgument& e) {
    throw ConfigError("lineshape.model", e.what());
  }
  c.lineshape_eta = num("lineshape.eta");
  if (!(c.lineshape_eta > 0.0) || c.lineshape_eta > 1.0)
    throw ConfigError("lineshape.eta", "must lie in (0, 1]");
  c.lineshape_optical_depth = num("lineshape.optical_depth");
  if (c.lineshape_optical_depth < 0.0)
    throw ConfigError("lineshape.optical_depth", "must be >= 0");
  c.lineshape_power = to_list("lineshape.power", get("lineshape.power"));
  for (double x : c.lineshape_power)
    positive("lineshape.power", x);
  c.lineshape_points = to_count("lineshape.detuning_points", get("lineshape.detuning_points"));
  if (c.lineshape_points < 16)
    throw ConfigError("lineshape.detuning_points", "need at least 16 points");

  c.snr_eta = open_unit("snr.eta", num("snr.eta"));
  c.snr_rabi_sq = rabi_or_opt("snr.rabi_sq", get("snr.rabi_sq"));

  c.sql_eta = to_list("sql.eta", get("sql.eta"));
  for (double e : c.sql_eta)
    open_unit("sql.eta", e);

  c.mc_samples = to_count("mc.samples", get("mc.samples"));
  if (c.mc_samples < 2)
    throw ConfigError("mc.samples", "need at least 2 samples");
  {
    const std::string t = trim(get("mc.seed"));
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), seed);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
      throw ConfigError("mc.seed", "'" + t + "' is not an unsigned 64-bit integer");
    c.mc_seed = seed;
  }
  c.mc_z_cells = to_count("mc.z_cells", get("mc.z_cells"));
  if (c.mc_z_cells < 2)
    throw ConfigError("mc.z_cells", "need at least 2 cells");
  c.mc_common_mode = num("mc.common_mode");
  if (c.mc_common_mode < 0.0)
    throw ConfigError("mc.common_mode", "must be >= 0");
  c.mc_eta = open_unit("mc.eta", num("mc.eta"));
  c.mc_rabi_sq = rabi_or_opt("mc.rabi_sq", get("mc.rabi_sq"));
  c.mc_n_in = positive("mc.n_in", num("mc.n_in"));

  c.ql_chi_ratio = positive("ql.chi_ratio", num("ql.chi_ratio"));
  c.ql_beta = to_list("ql.beta", get("ql.beta"));
  for (double b : c.ql_beta)
    if (b < 0.0)
      throw ConfigError("ql.beta", "must be >= 0");
  c.ql_points = to_count("ql.n_points", get("ql.n_points"));
  if (c.ql_points < 2)
    throw ConfigError("ql.n_points", "need at least 2 points");

  c.output_dir = trim(get("output.dir"));
  if (c.output_dir.empty())
    throw ConfigError("output.dir", "must not be empty");
  c.output_gnuplot = to_bool("output.gnuplot", get("output.gnuplot"));

  c.values = std::move(values);
  return c;
}

std::vector<std::string> config_header_lines(const RunConfig& cfg)
{
  std::vector<std::string> out;
  out.push_back("#@ mode = " + cfg.mode);
  for (const auto& k : config_keys())
    out.push_back(std::string("#@ ") + k.key + " = " + cfg.values.at(k.key));
  return out;
}

RunConfig parse_config_header(std::istream& csv)
{
  std::string mode;
  std::map<std::string, std::string> values;
  std::string line;
  while (std::getline(csv, line)) {
    if (line.rfind("#", 0) != 0)
      break;
    if (line.rfind("#@ ", 0) != 0)
      continue;
    const std::string body = line.substr(3);
    const auto eq = body.find(" = ");
    if (eq == std::string::npos)
      continue;
    const std::string key = body.substr(0, eq);
    const std::string value = body.substr(eq + 3);
    if (key == "mode")
      mode = value;
    else if (known_key(key))
      values[key] = value;
    else
      throw ConfigError(key, "unknown key in CSV header");
  }
  if (mode.empty())
    throw ConfigError("mode", "CSV header carries no configuration");
  return build_config(mode, std::move(values));
}

} // namespace magsim
