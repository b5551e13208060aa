#pragma once

#include <istream>
#include <string>
#include <vector>

namespace fdstat {

/// One numeric value per line. A single non-numeric first line is taken as a
/// header; blank lines are skipped. Throws ErrorKind::Parse on any other
/// non-numeric line and ErrorKind::Io when the file cannot be read.
std::vector<double> read_values(std::istream& in);
std::vector<double> read_values_file(const std::string& path);

}  // namespace fdstat
