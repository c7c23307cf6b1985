#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nvdrift {

/// Flat `key = value` text document. Insertion order is kept so that emitted
/// files are stable; lookups are linear, which is fine for the handful of
/// keys our files carry.
class KeyValueFile {
 public:
  static KeyValueFile parse(std::string_view text, std::string_view source = "<text>");

  void set(std::string key, std::string value);
  void set(std::string key, double value);
  void set(std::string key, std::int64_t value);
  void set(std::string key, bool value);

  bool contains(std::string_view key) const;
  std::optional<std::string_view> find(std::string_view key) const;

  /// Typed getters throw ParseError naming the key when it is missing or malformed.
  std::string_view get_string(std::string_view key) const;
  double get_double(std::string_view key) const;
  std::int64_t get_int(std::string_view key) const;
  bool get_bool(std::string_view key) const;

  double get_double_or(std::string_view key, double fallback) const;
  std::int64_t get_int_or(std::string_view key, std::int64_t fallback) const;
  bool get_bool_or(std::string_view key, bool fallback) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string serialize() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::string source_ = "<text>";
};

}  // namespace nvdrift
