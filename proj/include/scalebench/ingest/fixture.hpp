#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "scalebench/error.hpp"

namespace scalebench::ingest {

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline constexpr std::string_view kChecksumPrefix = "#checksum\tfnv1a64\t";

// Tab-separated table with '#' comment header lines and an optional
// "#checksum<TAB>fnv1a64<TAB><hex>" footer covering every preceding byte.
struct TsvFixture {
  std::string path;
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> row_lines;  // 1-based source line of each row
  bool checksum_verified = false;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    fail(ErrorKind::SchemaError, path + ": missing column '" + std::string(name) + "'");
  }
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.emplace_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

inline TsvFixture parse_fixture(std::string_view text, std::string path, bool require_checksum) {
  TsvFixture fx;
  fx.path = std::move(path);
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.substr(0, kChecksumPrefix.size()) == kChecksumPrefix) {
      const auto expected = std::string(line.substr(kChecksumPrefix.size()));
      const auto actual = hex64(fnv1a64(text.substr(0, pos)));
      if (expected != actual) {
        fail(ErrorKind::SchemaError, fx.path + ": checksum mismatch (footer " + expected + ", content " + actual + ")");
      }
      const auto rest = text.substr(end);
      if (rest.find_first_not_of("\r\n") != std::string_view::npos) {
        fail(ErrorKind::SchemaError, fx.path + ": content after checksum footer");
      }
      fx.checksum_verified = true;
      break;
    }
    pos = end + 1;
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto c = line.substr(1);
      if (!c.empty() && c.front() == ' ') c.remove_prefix(1);
      fx.comments.emplace_back(c);
      continue;
    }
    auto fields = split_tabs(line);
    if (fx.columns.empty()) {
      fx.columns = std::move(fields);
      continue;
    }
    if (fields.size() != fx.columns.size()) {
      fail(ErrorKind::SchemaError, fx.path + " line " + std::to_string(line_no) + " (" + fields.front() +
                                       "): expected " +
                                       std::to_string(fx.columns.size()) + " fields, got " +
                                       std::to_string(fields.size()));
    }
    fx.rows.push_back(std::move(fields));
    fx.row_lines.push_back(line_no);
  }
  if (require_checksum && !fx.checksum_verified) {
    fail(ErrorKind::SchemaError, fx.path + ": missing checksum footer");
  }
  if (fx.columns.empty()) fail(ErrorKind::SchemaError, fx.path + ": no header row");
  return fx;
}

inline TsvFixture load_fixture(const std::string& path, bool require_checksum = false) {
  return parse_fixture(read_file(path), path, require_checksum);
}

// Appends (or replaces) the checksum footer.
inline std::string seal_fixture(std::string_view body) {
  std::string out(body);
  if (const auto at = out.find(kChecksumPrefix); at != std::string::npos) out.resize(at);
  if (!out.empty() && out.back() != '\n') out.push_back('\n');
  const auto sum = hex64(fnv1a64(out));
  out += kChecksumPrefix;
  out += sum;
  out.push_back('\n');
  return out;
}

inline double parse_number(std::string_view s, const std::string& where) {
  std::string t(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    fail(ErrorKind::SchemaError, where + ": '" + t + "' is not a number");
  }
  if (used != t.size()) fail(ErrorKind::SchemaError, where + ": '" + t + "' is not a number");
  return v;
}

// "0.25B" -> 2.5e8; suffixes K, M, B (or G), T, case-insensitive; bare numbers pass through.
inline double parse_size(std::string_view s) {
  std::string t(s);
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  if (t.empty()) fail(ErrorKind::UsageError, "empty size value");
  double scale = 1.0;
  switch (std::toupper(static_cast<unsigned char>(t.back()))) {
    case 'K': scale = 1e3; break;
    case 'M': scale = 1e6; break;
    case 'B':
    case 'G': scale = 1e9; break;
    case 'T': scale = 1e12; break;
    default: break;
  }
  if (scale != 1.0) t.pop_back();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    fail(ErrorKind::UsageError, "'" + std::string(s) + "' is not a size");
  }
  if (used != t.size()) fail(ErrorKind::UsageError, "'" + std::string(s) + "' is not a size");
  return v * scale;
}

inline std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace scalebench::ingest
