#ifndef PLATOON_CSV_HPP
#define PLATOON_CSV_HPP

#include <string>
#include <vector>

namespace platoon::csv {

/// Shortest decimal representation that round-trips the double exactly.
std::string format(double value);

/// Splits one CSV line on commas. No quoting support; the traces written by
/// this project never contain quoted fields.
std::vector<std::string> split_line(const std::string& line);

}  // namespace platoon::csv

#endif
