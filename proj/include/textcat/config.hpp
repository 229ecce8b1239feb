#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace textcat {

/// `key = value` settings. Blank lines and `#` comments are ignored; list
/// values are comma separated.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& is, std::string_view origin = "config");
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(std::string_view key) const { return values_.find(key) != values_.end(); }
  std::optional<std::string> get(std::string_view key) const;

  std::string get_string(std::string_view key, std::string fallback) const;
  std::uint64_t get_uint(std::string_view key, std::uint64_t fallback) const;
  double get_double(std::string_view key, double fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;
  std::vector<std::string> get_list(std::string_view key, std::vector<std::string> fallback) const;

  void set(std::string key, std::string value);
  void set_list(std::string key, const std::vector<std::string>& values);

  const std::map<std::string, std::string, std::less<>>& values() const noexcept { return values_; }

  /// Sorted by key.
  void write(std::ostream& os) const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

std::vector<std::string> split_list(std::string_view value, char sep = ',');
std::string trim(std::string_view s);

}  // namespace textcat
