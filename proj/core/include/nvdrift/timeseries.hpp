#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nvdrift {

/// Canonical variable names used across files and frames.
namespace var {
inline constexpr std::string_view kT1 = "T1";          // optics-table temperature, degC
inline constexpr std::string_view kT2 = "T2";          // room temperature, degC
inline constexpr std::string_view kX = "X";            // micrometers
inline constexpr std::string_view kY = "Y";            // micrometers
inline constexpr std::string_view kZ = "Z";            // micrometers
inline constexpr std::string_view kNuRes = "nu_res";   // GHz
}  // namespace var

struct Sample {
  double t = 0.0;  // seconds since Unix epoch
  double value = 0.0;

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Timestamped scalar samples of one variable. Timestamps are strictly
/// increasing and every value is finite; both are checked on construction,
/// after which the series is immutable.
class TimeSeries {
 public:
  TimeSeries(std::string name, std::vector<Sample> samples);
  TimeSeries(std::string name, std::span<const double> timestamps, std::span<const double> values);

  const std::string& name() const noexcept { return name_; }
  std::span<const Sample> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }

  /// First/last timestamp. Throws TooFewSamples on an empty series.
  double start() const;
  double end() const;

  std::vector<double> timestamps() const;
  std::vector<double> values() const;

  TimeSeries renamed(std::string name) const;

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

 private:
  std::string name_;
  std::vector<Sample> samples_;
};

/// Linear interpolation inside the sampled span. Exact sample values are
/// returned on sample timestamps. Extrapolation is refused with OutOfRange.
double interpolate_at(const TimeSeries& series, double t);

/// Shifts every sample strictly after `t_break` by `offset`.
TimeSeries correct_discontinuity(const TimeSeries& series, double t_break, double offset);

/// Samples with t0 <= t <= t1, order preserved. EmptyResult when none remain.
TimeSeries restrict(const TimeSeries& series, double t0, double t1);

/// Splits wherever consecutive samples are more than `max_gap` seconds apart.
std::vector<TimeSeries> split_at_gaps(const TimeSeries& series, double max_gap);

/// (v - min) / (max - min). DegenerateRange for a constant sequence.
std::vector<double> normalize_unit(std::span<const double> values);

/// Several variables sampled on one shared grid.
class AlignedFrame {
 public:
  AlignedFrame() = default;
  AlignedFrame(std::vector<double> timestamps, std::vector<std::string> names,
               std::vector<std::vector<double>> columns);

  std::span<const double> timestamps() const noexcept { return timestamps_; }
  std::size_t rows() const noexcept { return timestamps_.size(); }
  const std::vector<std::string>& column_names() const noexcept { return names_; }

  bool has_column(std::string_view name) const noexcept;
  /// Throws MissingColumn.
  std::span<const double> column(std::string_view name) const;

  /// Rows with t0 <= timestamp <= t1.
  AlignedFrame filter_rows(double t0, double t1) const;

  /// Subset/reorder of columns. Throws MissingColumn.
  AlignedFrame select(std::span<const std::string> names) const;

 private:
  std::vector<double> timestamps_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

struct AlignOptions {
  /// Explicit grid; every point must lie inside the common span.
  std::optional<std::vector<double>> grid;
  /// Use this series' own sample times (inside the common span) as the grid.
  std::optional<std::string> reference;
  /// When set, grid points that fall inside a sampling gap longer than this in
  /// any source are dropped instead of bridged.
  std::optional<double> max_gap;
};

/// Resamples every series onto one grid by linear interpolation. Without an
/// explicit grid or reference, the grid is the sorted, deduplicated union of
/// all source sample times inside the common span.
AlignedFrame align(std::span<const TimeSeries> series, const AlignOptions& options = {});

}  // namespace nvdrift
