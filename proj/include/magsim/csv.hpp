#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace magsim {

/// %.17g-style text (17 significant digits), independent of locale.
std::string format_double(double v);

using CsvCell = std::variant<double, std::string>;

struct CsvColumn {
  std::string name;
  std::string description;
};

/**
 * One CSV file: '#' metadata lines, then a header row and comma-separated
 * data rows. The data section never depends on time or thread count.
 */
class CsvWriter {
public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& metadata,
            std::vector<CsvColumn> columns);

  void row(const std::vector<CsvCell>& cells);
  const std::vector<CsvColumn>& columns() const { return columns_; }
  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::vector<CsvColumn> columns_;
};

/// Lines of a CSV file that are not '#' comments.
std::vector<std::string> csv_data_section(const std::filesystem::path& path);

} // namespace magsim
