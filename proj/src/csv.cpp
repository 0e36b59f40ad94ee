#include "magsim/csv.hpp"

#include <charconv>
#include <cmath>

#include "magsim/errors.hpp"

namespace magsim {

std::string format_double(double v)
{
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& metadata,
                     std::vector<CsvColumn> columns)
    : path_(path), out_(path, std::ios::binary), columns_(std::move(columns))
{
  if (!out_)
    throw InvalidArgument("cannot open " + path.string() + " for writing");
  for (const auto& m : metadata)
    out_ << (m.rfind("#", 0) == 0 ? m : "# " + m) << '\n';
  for (std::size_t k = 0; k < columns_.size(); ++k)
    out_ << (k ? "," : "") << columns_[k].name;
  out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvCell>& cells)
{
  if (cells.size() != columns_.size())
    throw InvalidArgument("CSV row width does not match the header of " + path_.string());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k)
      out_ << ',';
    if (const double* d = std::get_if<double>(&cells[k]))
      out_ << format_double(*d);
    else
      out_ << std::get<std::string>(cells[k]);
  }
  out_ << '\n';
}

std::vector<std::string> csv_data_section(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InvalidArgument("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("#", 0) != 0)
      lines.push_back(line);
  return lines;
}

} // namespace magsim
