// magsim command-line front end.
//
//   magsim <mode> --config <file> [--set key=value ...] [--out <dir>]
//
// Exit status: 0 success, 1 configuration / input error, 2 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "magsim/config.hpp"
#include "magsim/errors.hpp"
#include "magsim/run.hpp"

namespace {

void print_keys(std::ostream& os)
{
  os << "configuration keys (defaults):\n";
  for (const auto& k : magsim::config_keys())
    os << "  " << k.key << " = " << k.default_value << "    # " << k.help << '\n';
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"EIT Faraday magnetometer simulator"};
  app.set_version_flag("--version", magsim::version_string());

  std::string mode;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  bool list_keys = false;

  app.add_option("mode", mode, "figure4 | lineshape | snr_point | sql_table | mc_validate | quantum_limit");
  app.add_option("--config,-c", config_path, "flat key = value configuration file");
  app.add_option("--set,-s", overrides, "override one key, key=value (repeatable)");
  app.add_option("--out,-o", out_dir, "output directory (overrides output.dir)");
  app.add_flag("--list-keys", list_keys, "print all configuration keys and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (list_keys) {
    print_keys(std::cout);
    return 0;
  }

  try {
    if (mode.empty())
      throw magsim::ConfigError("mode", "missing mode argument");
    std::map<std::string, std::string> file_values;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in)
        throw magsim::ConfigError("--config", "cannot open '" + config_path + "'");
      file_values = magsim::parse_config_text(in, config_path);
    }
    if (!out_dir.empty())
      overrides.push_back("output.dir=" + out_dir);
    const auto cfg = magsim::resolve_config(mode, file_values, overrides);
    const auto result = magsim::run(cfg, std::cerr);
    for (const auto& f : result.files)
      std::cout << f.string() << '\n';
    return 0;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "magsim: error: " << e.what() << '\n';
    return 1;
  } catch (const magsim::InvalidArgument& e) {
    std::cerr << "magsim: error: " << e.what() << '\n';
    return 1;
  } catch (const magsim::NumericalError& e) {
    std::cerr << "magsim: numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "magsim: numerical failure: " << e.what() << '\n';
    return 2;
  }
}
