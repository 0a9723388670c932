#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sbgk::csv {

/// Shortest round-trip representation.
std::string format(double x);
std::string format(std::int64_t x);
inline std::string format(int x) { return format(static_cast<std::int64_t>(x)); }

double parse_double(std::string_view s);
std::int64_t parse_int(std::string_view s);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
};

void write_row(std::ostream& os, const std::vector<std::string>& cells);
Table read(std::istream& is);

}  // namespace sbgk::csv
