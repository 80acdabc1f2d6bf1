#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jetseg {

/// Plain-text `key = value` settings, one per line, `#` starts a comment.
/// Keys are case-sensitive; a repeated key overrides the earlier value.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const;
  void set(const std::string& key, std::string value);

  std::optional<std::string> find(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated list of reals, e.g. `zone_fractions = 0.2, 0.3, 0.5`.
  std::vector<double> get_doubles(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

  /// Serializes back to the file format with keys in sorted order.
  std::string to_string() const;

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace jetseg
