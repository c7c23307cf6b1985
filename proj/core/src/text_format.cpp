#include "nvdrift/text_format.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>

namespace nvdrift {

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), ptr);
}

std::string_view trim(std::string_view text) noexcept {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

namespace {

std::optional<int> parse_fixed_int(std::string_view text, std::size_t pos, std::size_t len) {
  if (pos + len > text.size()) return std::nullopt;
  int value = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + (c - '0');
  }
  return value;
}

std::optional<double> parse_iso8601(std::string_view s) {
  // YYYY-MM-DD[T ]hh:mm:ss[.fff][Z|+00:00]
  if (s.size() < 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
      s[13] != ':' || s[16] != ':') {
    return std::nullopt;
  }
  const auto year = parse_fixed_int(s, 0, 4);
  const auto month = parse_fixed_int(s, 5, 2);
  const auto day = parse_fixed_int(s, 8, 2);
  const auto hour = parse_fixed_int(s, 11, 2);
  const auto minute = parse_fixed_int(s, 14, 2);
  const auto second = parse_fixed_int(s, 17, 2);
  if (!year || !month || !day || !hour || !minute || !second) return std::nullopt;
  if (*hour > 23 || *minute > 59 || *second > 60) return std::nullopt;

  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{*year}, std::chrono::month{static_cast<unsigned>(*month)},
                           std::chrono::day{static_cast<unsigned>(*day)}};
  if (!ymd.ok()) return std::nullopt;

  std::size_t pos = 19;
  double fraction = 0.0;
  if (pos < s.size() && s[pos] == '.') {
    const std::size_t start = pos;
    ++pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == start + 1) return std::nullopt;
    fraction = *parse_double(std::string("0") + std::string(s.substr(start, pos - start)));
  }
  const std::string_view zone = s.substr(pos);
  if (!(zone.empty() || zone == "Z" || zone == "z" || zone == "+00:00" || zone == "+0000" ||
        zone == "-00:00")) {
    return std::nullopt;
  }
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<double>(days) * 86400.0 + *hour * 3600.0 + *minute * 60.0 + *second + fraction;
}

}  // namespace

std::optional<double> parse_timestamp(std::string_view text) {
  text = trim(text);
  if (auto numeric = parse_double(text)) {
    if (!std::isfinite(*numeric)) return std::nullopt;
    return numeric;
  }
  return parse_iso8601(text);
}

}  // namespace nvdrift
