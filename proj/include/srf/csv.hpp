#pragma once

// Locale-free CSV with a header row. Numbers use the shortest round-trip form,
// text fields are quoted only when they need it.

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

namespace srf::csv {

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline double parse_number(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  return v;
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

inline std::string field(double v) { return format_number(v); }
inline std::string field(bool v) { return v ? "1" : "0"; }
inline std::string field(std::string_view v) { return quote(v); }
inline std::string field(const char* v) { return quote(v); }
inline std::string field(const std::string& v) { return quote(v); }
template <class T>
  requires std::is_integral_v<T>
std::string field(T v) {
  return std::to_string(v);
}

/// Row writer; the column count is fixed by the header.
class Writer {
 public:
  Writer(std::ostream& os, const std::vector<std::string>& header) : os_(os), width_(header.size()) {
    for (std::size_t k = 0; k < header.size(); ++k) os_ << (k ? "," : "") << quote(header[k]);
    os_ << '\n';
  }

  template <class... Ts>
  void row(const Ts&... values) {
    if (sizeof...(Ts) != width_)
      throw std::logic_error("csv row has " + std::to_string(sizeof...(Ts)) + " fields, header has " + std::to_string(width_));
    std::size_t k = 0;
    ((os_ << (k++ ? "," : "") << field(values)), ...);
    os_ << '\n';
  }

 private:
  std::ostream& os_;
  std::size_t width_;
};

/// Split one record; handles quoted fields with doubled quotes.
inline std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"') {
        if (k + 1 < line.size() && line[k + 1] == '"') {
          cur += '"';
          ++k;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quote in csv record");
  out.push_back(std::move(cur));
  return out;
}

/// Whole table as text cells, addressed by header name.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t k = 0; k < header.size(); ++k)
      if (header[k] == name) return k;
    throw std::invalid_argument("csv has no column '" + std::string(name) + "'");
  }
  bool has_column(std::string_view name) const {
    for (const auto& h : header)
      if (h == name) return true;
    return false;
  }
  std::vector<double> numbers(std::string_view name) const {
    const std::size_t c = column(name);
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(parse_number(r.at(c)));
    return v;
  }
};

inline Table read(std::istream& is) {
  Table t;
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("csv is empty");
  t.header = split_record(line);
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    auto r = split_record(line);
    if (r.size() != t.header.size())
      throw std::invalid_argument("csv row " + std::to_string(t.rows.size() + 1) + " has " + std::to_string(r.size()) +
                                  " fields, header has " + std::to_string(t.header.size()));
    t.rows.push_back(std::move(r));
  }
  return t;
}

inline Table read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return read(in);
}

}  // namespace srf::csv
