#include "entsim/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace entsim::csv {

std::string format_number(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

std::string format_integer(long x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%ld", x);
  return buf;
}

std::string format_flag(bool x) { return x ? "1" : "0"; }

std::string join_row(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) row += ',';
    row += cells[i];
  }
  return row;
}

Writer::Writer(const std::string& path) : out_(path, std::ios::binary) {
  if (!out_) {
    throw std::runtime_error("cannot open output file '" + path + "'");
  }
}

void Writer::write_row(const std::vector<std::string>& cells) {
  out_ << join_row(cells) << '\n';
}

}  // namespace entsim::csv
