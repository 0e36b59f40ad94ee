#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "magsim/atomic.hpp"
#include "magsim/errors.hpp"
#include "magsim/propagation.hpp"
#include "magsim/sensitivity.hpp"

namespace magsim {

// Configuration problem tied to one key; the CLI prints the key and exits with 1.
class ConfigError : public InvalidArgument {
public:
  ConfigError(std::string key, const std::string& what)
      : InvalidArgument("config key '" + key + "': " + what), key_(std::move(key))
  {
  }
  const std::string& key() const { return key_; }

private:
  std::string key_;
};

struct ConfigKey {
  const char* key;
  const char* default_value;
  const char* help;
};

/// Every recognised key with its default, in output order.
const std::vector<ConfigKey>& config_keys();

const std::vector<std::string>& run_modes();

/**
 * Fully resolved run configuration. `values` holds the textual value of every
 * key after defaults, file and --set overrides; the typed fields are parsed
 * from it and are what the run modes read.
 */
struct RunConfig {
  std::string mode;
  std::map<std::string, std::string> values;

  AtomicParams physics;
  double delta0_over_gamma0 = 1e-2;

  std::vector<double> eta_list;
  std::size_t z_steps = 2048;
  double richardson_tol = 1e-8;

  PowerMapping detection;
  std::vector<double> power_grid;

  double opm_alpha = 1.0;
  bool opm_stark_term = false;

  AbsorptionKind lineshape_model = AbsorptionKind::linear;
  double lineshape_eta = 0.5;
  double lineshape_optical_depth = 1.0;
  std::vector<double> lineshape_power; // |Omega(0)|^2 / (Delta0 gamma0)
  std::size_t lineshape_points = 4096;

  double snr_eta = 0.06;
  double snr_rabi_sq = 0.0; // |Omega(0)|^2 / (Delta0 gamma0); 0 means the optimum

  std::vector<double> sql_eta;

  std::size_t mc_samples = 1000000;
  std::uint64_t mc_seed = 12345;
  std::size_t mc_z_cells = 64;
  double mc_common_mode = 10.0;
  double mc_eta = 0.1;
  double mc_rabi_sq = 0.0; // 0 means the optimum
  double mc_n_in = 1e10;

  double ql_chi_ratio = 1e4;
  std::vector<double> ql_beta;
  std::size_t ql_points = 241;

  std::string output_dir = "magsim_out";
  bool output_gnuplot = true;

  bool operator==(const RunConfig& o) const { return mode == o.mode && values == o.values; }
};

/// Reads `key = value` lines; '#' starts a comment. Unknown keys are errors.
std::map<std::string, std::string> parse_config_text(std::istream& in, const std::string& origin);

/// Applies one `key=value` override.
void apply_override(std::map<std::string, std::string>& values, const std::string& assignment);

/// Defaults + file + overrides -> validated RunConfig.
RunConfig resolve_config(const std::string& mode, const std::map<std::string, std::string>& file_values,
                         const std::vector<std::string>& overrides);

/// Builds the typed fields from `values`; throws ConfigError naming the key.
RunConfig build_config(const std::string& mode, std::map<std::string, std::string> values);

/// Lines "#@ key = value" for the CSV metadata block (mode first).
std::vector<std::string> config_header_lines(const RunConfig& cfg);

/// Recovers the configuration from the metadata block of a CSV written by magsim.
RunConfig parse_config_header(std::istream& csv);

/// "log:lo:hi:n" or a comma-separated list.
std::vector<double> parse_grid(const std::string& key, const std::string& text);

} // namespace magsim
