#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "geostat/errors.hpp"

// Text I/O helpers shared by the CSV schemas, metadata sidecars, fit-result
// files and the flat key=value config format.

namespace geostat {

// Shortest decimal representation that round-trips the exact double.
inline std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  // from_chars rejects a leading '+', which hand-edited files sometimes carry.
  if (!text.empty() && text.front() == '+') ++begin;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw ParseError("not a number: '" + std::string(text) + "'");
  return v;
}

inline long long parse_int(std::string_view text) {
  long long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw ParseError("not an integer: '" + std::string(text) + "'");
  return v;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == sep) {
      out.emplace_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

// Whole-file write through a temp file in the same directory plus rename, so
// readers never observe partial output.
inline void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path dir = path.parent_path();
  if (!dir.empty()) {
    std::error_code ec;
    fs::create_directories(dir, ec);
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw IoError("short write: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed: " + path.string() + ": " + ec.message());
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::string text = read_text(path);
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      if (i > start || i < text.size()) lines.emplace_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

// Flat "key = value" text with '#' comments. Ordered map keeps files diffable.
using KeyValues = std::map<std::string, std::string>;

inline std::string format_key_values(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

inline KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i != text.size() && text[i] != '\n') continue;
    std::string_view line = trim(std::string_view(text).substr(start, i - start));
    start = i + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("expected 'key = value', got '" + std::string(line) + "'");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError("empty key in '" + std::string(line) + "'");
    kv[key] = value;
  }
  return kv;
}

inline KeyValues read_key_values(const std::filesystem::path& path) {
  return parse_key_values(read_text(path));
}

inline const std::string& require_key(const KeyValues& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ParseError("missing key '" + key + "'");
  return it->second;
}

}  // namespace geostat
