#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace casimir::io {

/// Malformed configuration text or value.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Shortest round-trip of at most 15 significant digits, '.' separator,
/// independent of the global locale.
[[nodiscard]] std::string format_number(double v);

using CsvField = std::variant<std::monostate, double, long, std::string>;

/// One comma-separated line (no trailing newline); monostate fields are empty.
[[nodiscard]] std::string csv_line(const std::vector<CsvField>& fields);

/// 64-bit FNV-1a.
[[nodiscard]] std::uint64_t fnv1a(std::string_view text);

/// `# casimir-maps v<version> config-hash=<16 hex digits>`
[[nodiscard]] std::string provenance_line(std::string_view canonical_config);

/// Flat key=value configuration. Blank lines and lines starting with '#' are
/// ignored; later assignments win.
class Config {
 public:
  static Config parse(std::string_view text);
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }
  [[nodiscard]] std::optional<std::string> raw(const std::string& key) const;

  [[nodiscard]] std::string get_string(const std::string& key, const std::string& fallback) const;
  /// Finite decimal literal; throws ConfigError otherwise.
  [[nodiscard]] double get_double(const std::string& key, double fallback) const;
  [[nodiscard]] long get_long(const std::string& key, long fallback) const;
  /// Comma-separated list of decimals.
  [[nodiscard]] std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;

  /// Sorted `key=value` lines; the provenance hash is taken over this text.
  [[nodiscard]] std::string canonical() const;

 private:
  std::map<std::string, std::string> values_;
};

[[nodiscard]] double parse_double(std::string_view text);
[[nodiscard]] long parse_long(std::string_view text);

}  // namespace casimir::io
