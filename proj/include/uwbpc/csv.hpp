#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace uwbpc::csv {

using Value = std::variant<std::int64_t, double, std::string>;
using Row = std::vector<Value>;

/// Shortest round-trip representation; inf/nan spelled out.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string quote(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string format(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  return quote(std::get<std::string>(v));
}

inline void write(std::ostream& os, const std::vector<std::string>& header, const std::vector<Row>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << quote(header[i]);
  os << "\r\n";
  for (const Row& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format(r[i]);
    os << "\r\n";
  }
}

}  // namespace uwbpc::csv
