#include "fdstat/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <string_view>

#include "fdstat/error.hpp"

namespace fdstat {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\xEF\xBB\xBF");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n,");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace

std::vector<double> read_values(std::istream& in) {
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto field = trim(line);
    if (field.empty()) continue;
    const auto v = parse_number(field);
    if (!v) {
      if (!seen_content) {
        seen_content = true;  // header
        continue;
      }
      fail(ErrorKind::Parse, "line " + std::to_string(line_no) + ": not a number: '" + std::string(field) + "'");
    }
    if (!std::isfinite(*v)) fail(ErrorKind::Input, "line " + std::to_string(line_no) + ": non-finite value");
    seen_content = true;
    out.push_back(*v);
  }
  if (in.bad()) fail(ErrorKind::Io, "read error");
  return out;
}

std::vector<double> read_values_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  return read_values(in);
}

}  // namespace fdstat
