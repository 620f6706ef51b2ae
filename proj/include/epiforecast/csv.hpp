#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace epi {

// Minimal RFC4180-style table: quoted fields may contain commas, doubled
// quotes and newlines.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column, -1 when absent.
  int column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);

// Quotes a field only when it needs quoting.
std::string csv_escape(std::string_view field);

// Shortest decimal string that round-trips the double.
std::string format_double(double v);

}  // namespace epi
