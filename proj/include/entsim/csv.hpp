// csv.hpp: fixed-format CSV emission for reproducible diffs.

#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace entsim::csv {

// Numbers are printed with nine significant digits (round-half-even via
// the IEEE decimal conversion), so identical runs produce identical bytes.
std::string format_number(double x);
std::string format_integer(long x);
std::string format_flag(bool x);  // 1/0, plot-friendly

std::string join_row(const std::vector<std::string>& cells);

class Writer {
 public:
  explicit Writer(const std::string& path);

  void write_row(const std::vector<std::string>& cells);
  bool good() const { return out_.good(); }

 private:
  std::ofstream out_;
};

}  // namespace entsim::csv
