#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace nvdrift {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Strict parse of a whole string as a finite or infinite double; nullopt on
/// any trailing garbage.
std::optional<double> parse_double(std::string_view text);

/// Epoch seconds from either a plain number or an ISO-8601 UTC timestamp
/// ("2024-03-01T12:00:00Z", optional fractional seconds, 'T' or ' ' separator).
std::optional<double> parse_timestamp(std::string_view text);

std::string_view trim(std::string_view text) noexcept;

}  // namespace nvdrift
