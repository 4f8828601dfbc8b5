#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace memolab {

// Reals are written with 17 significant digits so that a rerun with the same
// seed reproduces the file byte for byte.
std::string format_real(double value);

using CsvCell = std::variant<std::string, double, std::int64_t>;

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<CsvCell> row);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t size() const { return rows_.size(); }
  const std::vector<CsvCell>& row(std::size_t i) const { return rows_[i]; }

  void write(std::ostream& out) const;
  std::string to_string() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<CsvCell>> rows_;
};

std::string format_cell(const CsvCell& cell);

}  // namespace memolab
