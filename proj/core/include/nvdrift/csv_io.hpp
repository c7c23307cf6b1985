#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nvdrift/timeseries.hpp"

namespace nvdrift {

/// A named collection of series, kept in insertion order.
class Dataset {
 public:
  /// Replaces an existing series of the same name.
  void put(TimeSeries series);
  bool contains(std::string_view name) const noexcept;
  /// Throws MissingColumn.
  const TimeSeries& get(std::string_view name) const;
  std::vector<std::string> names() const;
  const std::vector<TimeSeries>& series() const noexcept { return series_; }
  bool empty() const noexcept { return series_.empty(); }

 private:
  std::vector<TimeSeries> series_;
};

/// Reads a series CSV. Narrow files (`timestamp,value`) produce one series
/// named `narrow_name`; wide files (`timestamp,<var>,<var>...`) produce one
/// series per column, skipping empty cells. Timestamps may be epoch seconds
/// or ISO-8601 UTC. Malformed input throws ParseError with the line number.
std::vector<TimeSeries> read_series_csv(std::istream& in, std::string_view source,
                                        std::string_view narrow_name);

/// File variant; narrow files are named after the file stem.
std::vector<TimeSeries> read_series_file(const std::filesystem::path& path);

/// A directory loads every `*.csv` whose header starts with `timestamp`
/// (sorted by file name); a file loads that file.
Dataset load_dataset(const std::filesystem::path& path);

/// Generic numeric table with a header row, e.g. `frequency_ghz,contrast_percent`.
struct NumericTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  /// Throws MissingColumn.
  std::span<const double> column(std::string_view name) const;
};

NumericTable read_numeric_csv(std::istream& in, std::string_view source);
NumericTable read_numeric_file(const std::filesystem::path& path);

std::string to_narrow_csv(const TimeSeries& series);
/// Union of all timestamps; cells are empty where a series has no sample.
std::string to_wide_csv(std::span<const TimeSeries> series);
std::string to_frame_csv(const AlignedFrame& frame);
std::string to_table_csv(const NumericTable& table);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace nvdrift
