#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "magsim/config.hpp"

namespace magsim {

struct RunOutput {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

std::string version_string();

/**
 * Executes cfg.mode, writing CSVs, SCHEMA.md and (optionally) plot.gp into
 * cfg.output_dir. Progress and warnings go to `log`. Core exceptions propagate:
 * InvalidArgument for bad input, NumericalError for numerical failures.
 */
RunOutput run(const RunConfig& cfg, std::ostream& log);

} // namespace magsim
