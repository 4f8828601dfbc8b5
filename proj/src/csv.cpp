#include "memolab/csv.hpp"

#include <fmt/format.h>

#include <cmath>
#include <ostream>
#include <sstream>

#include "memolab/error.hpp"

namespace memolab {

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", value);
}

std::string format_cell(const CsvCell& cell) {
  struct Visitor {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(double d) const { return format_real(d); }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
  };
  return std::visit(Visitor{}, cell);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<CsvCell> row) {
  if (row.size() != header_.size())
    throw LabError(errc::kInvalidArgument,
                   fmt::format("csv row has {} cells, header has {}", row.size(), header_.size()));
  rows_.push_back(std::move(row));
}

void CsvTable::write(std::ostream& out) const {
  for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << '\n';
  }
}

std::string CsvTable::to_string() const {
  std::ostringstream out;
  write(out);
  return out.str();
}

}  // namespace memolab
