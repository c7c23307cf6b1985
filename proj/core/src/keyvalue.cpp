#include "nvdrift/keyvalue.hpp"

#include <charconv>

#include "nvdrift/error.hpp"
#include "nvdrift/text_format.hpp"

namespace nvdrift {

KeyValueFile KeyValueFile::parse(std::string_view text, std::string_view source) {
  KeyValueFile kv;
  kv.source_ = std::string(source);
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::ParseError,
                  std::string(source) + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorCode::ParseError,
                  std::string(source) + ":" + std::to_string(line_no) + ": empty key");
    }
    kv.set(std::string(key), std::string(trim(line.substr(eq + 1))));
  }
  return kv;
}

void KeyValueFile::set(std::string key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

void KeyValueFile::set(std::string key, double value) { set(std::move(key), format_double(value)); }

void KeyValueFile::set(std::string key, std::int64_t value) {
  set(std::move(key), std::to_string(value));
}

void KeyValueFile::set(std::string key, bool value) {
  set(std::move(key), std::string(value ? "true" : "false"));
}

bool KeyValueFile::contains(std::string_view key) const { return find(key).has_value(); }

std::optional<std::string_view> KeyValueFile::find(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return std::string_view(v);
  }
  return std::nullopt;
}

std::string_view KeyValueFile::get_string(std::string_view key) const {
  if (auto v = find(key)) return *v;
  throw Error(ErrorCode::ParseError, source_ + ": missing key '" + std::string(key) + "'");
}

double KeyValueFile::get_double(std::string_view key) const {
  const auto text = get_string(key);
  if (auto v = parse_double(text)) return *v;
  throw Error(ErrorCode::ParseError, source_ + ": key '" + std::string(key) +
                                         "' is not a number: '" + std::string(text) + "'");
}

std::int64_t KeyValueFile::get_int(std::string_view key) const {
  const auto text = get_string(key);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, source_ + ": key '" + std::string(key) +
                                           "' is not an integer: '" + std::string(text) + "'");
  }
  return value;
}

bool KeyValueFile::get_bool(std::string_view key) const {
  const auto text = get_string(key);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw Error(ErrorCode::ParseError, source_ + ": key '" + std::string(key) +
                                         "' is not a boolean: '" + std::string(text) + "'");
}

double KeyValueFile::get_double_or(std::string_view key, double fallback) const {
  return contains(key) ? get_double(key) : fallback;
}

std::int64_t KeyValueFile::get_int_or(std::string_view key, std::int64_t fallback) const {
  return contains(key) ? get_int(key) : fallback;
}

bool KeyValueFile::get_bool_or(std::string_view key, bool fallback) const {
  return contains(key) ? get_bool(key) : fallback;
}

std::string KeyValueFile::serialize() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

}  // namespace nvdrift
