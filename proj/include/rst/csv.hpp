#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rst {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

/// Writes '#'-prefixed provenance lines, then a header row, then data rows.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  /// Each line of `text` becomes one "# ..." comment line.
  CsvWriter& comment(std::string_view text);
  CsvWriter& header(const std::vector<std::string>& columns);
  CsvWriter& row(std::span<const double> values);
  /// Mixed row: integers/labels already formatted.
  CsvWriter& row(const std::vector<std::string>& cells);

 private:
  std::ostream& os_;
};

}  // namespace rst
