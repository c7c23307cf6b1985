#include "nvdrift/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nvdrift/error.hpp"
#include "nvdrift/text_format.hpp"

namespace nvdrift {

namespace {

void validate(const std::string& name, std::span<const Sample> samples) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!std::isfinite(s.t) || !std::isfinite(s.value)) {
      throw Error(ErrorCode::NonFiniteValue, "series '" + name + "' sample " + std::to_string(i) +
                                                 " is not finite");
    }
    if (i == 0) continue;
    const double prev = samples[i - 1].t;
    if (s.t == prev) {
      throw Error(ErrorCode::DuplicateTimestamp,
                  "series '" + name + "' repeats timestamp " + format_double(s.t));
    }
    if (s.t < prev) {
      throw Error(ErrorCode::InvalidSeries, "series '" + name + "' timestamp " +
                                                format_double(s.t) + " precedes " +
                                                format_double(prev));
    }
  }
}

// Index i of the segment [t_i, t_{i+1}] containing t. Caller guarantees the
// series has >= 2 samples and t is inside the span.
std::size_t segment_index(std::span<const Sample> s, double t) {
  auto it = std::upper_bound(s.begin(), s.end(), t,
                             [](double value, const Sample& sample) { return value < sample.t; });
  auto idx = static_cast<std::size_t>(std::distance(s.begin(), it));
  if (idx == 0) return 0;
  return std::min(idx - 1, s.size() - 2);
}

struct Span {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

Span common_span(std::span<const TimeSeries> series) {
  Span span;
  for (const auto& s : series) {
    if (s.size() < 2) {
      throw Error(ErrorCode::TooFewSamples,
                  "series '" + s.name() + "' needs at least 2 samples to align");
    }
    span.lo = std::max(span.lo, s.start());
    span.hi = std::min(span.hi, s.end());
  }
  if (!(span.lo < span.hi)) {
    throw Error(ErrorCode::NoOverlap, "series do not share a time interval of positive length");
  }
  return span;
}

bool inside_gap(const TimeSeries& s, double t, double max_gap) {
  const auto samples = s.samples();
  const std::size_t i = segment_index(samples, t);
  if (t == samples[i].t || t == samples[i + 1].t) return false;
  return samples[i + 1].t - samples[i].t > max_gap;
}

}  // namespace

TimeSeries::TimeSeries(std::string name, std::vector<Sample> samples)
    : name_(std::move(name)), samples_(std::move(samples)) {
  validate(name_, samples_);
}

TimeSeries::TimeSeries(std::string name, std::span<const double> timestamps,
                       std::span<const double> values)
    : name_(std::move(name)) {
  if (timestamps.size() != values.size()) {
    throw Error(ErrorCode::LengthMismatch, "series '" + name_ + "' has " +
                                               std::to_string(timestamps.size()) +
                                               " timestamps but " + std::to_string(values.size()) +
                                               " values");
  }
  samples_.reserve(timestamps.size());
  for (std::size_t i = 0; i < timestamps.size(); ++i) samples_.push_back({timestamps[i], values[i]});
  validate(name_, samples_);
}

double TimeSeries::start() const {
  if (samples_.empty()) throw Error(ErrorCode::TooFewSamples, "series '" + name_ + "' is empty");
  return samples_.front().t;
}

double TimeSeries::end() const {
  if (samples_.empty()) throw Error(ErrorCode::TooFewSamples, "series '" + name_ + "' is empty");
  return samples_.back().t;
}

std::vector<double> TimeSeries::timestamps() const {
  std::vector<double> out(samples_.size());
  std::transform(samples_.begin(), samples_.end(), out.begin(), [](const Sample& s) { return s.t; });
  return out;
}

std::vector<double> TimeSeries::values() const {
  std::vector<double> out(samples_.size());
  std::transform(samples_.begin(), samples_.end(), out.begin(),
                 [](const Sample& s) { return s.value; });
  return out;
}

TimeSeries TimeSeries::renamed(std::string name) const {
  TimeSeries copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

double interpolate_at(const TimeSeries& series, double t) {
  const auto s = series.samples();
  if (s.size() < 2) {
    throw Error(ErrorCode::TooFewSamples,
                "series '" + series.name() + "' needs at least 2 samples to interpolate");
  }
  if (!(t >= s.front().t && t <= s.back().t)) {
    throw Error(ErrorCode::OutOfRange, "t=" + format_double(t) + " outside span of '" +
                                           series.name() + "' [" + format_double(s.front().t) +
                                           ", " + format_double(s.back().t) + "]");
  }
  const std::size_t i = segment_index(s, t);
  const Sample& a = s[i];
  const Sample& b = s[i + 1];
  if (t == a.t) return a.value;
  if (t == b.t) return b.value;
  const double w = (t - a.t) / (b.t - a.t);
  return a.value + (b.value - a.value) * w;
}

TimeSeries correct_discontinuity(const TimeSeries& series, double t_break, double offset) {
  if (series.empty() || t_break < series.start() || t_break > series.end()) {
    throw Error(ErrorCode::OutOfRange, "break time " + format_double(t_break) +
                                           " outside span of '" + series.name() + "'");
  }
  std::vector<Sample> out(series.samples().begin(), series.samples().end());
  for (auto& sample : out) {
    if (sample.t > t_break) sample.value += offset;
  }
  return TimeSeries(series.name(), std::move(out));
}

TimeSeries restrict(const TimeSeries& series, double t0, double t1) {
  if (!(t0 <= t1)) {
    throw Error(ErrorCode::InvalidArgument, "restrict bounds must satisfy t0 <= t1");
  }
  std::vector<Sample> out;
  for (const auto& sample : series.samples()) {
    if (sample.t >= t0 && sample.t <= t1) out.push_back(sample);
  }
  if (out.empty()) {
    throw Error(ErrorCode::EmptyResult, "no samples of '" + series.name() + "' in [" +
                                            format_double(t0) + ", " + format_double(t1) + "]");
  }
  return TimeSeries(series.name(), std::move(out));
}

std::vector<TimeSeries> split_at_gaps(const TimeSeries& series, double max_gap) {
  std::vector<TimeSeries> parts;
  std::vector<Sample> current;
  for (const auto& sample : series.samples()) {
    if (!current.empty() && sample.t - current.back().t > max_gap) {
      parts.emplace_back(series.name(), std::move(current));
      current.clear();
    }
    current.push_back(sample);
  }
  if (!current.empty()) parts.emplace_back(series.name(), std::move(current));
  return parts;
}

std::vector<double> normalize_unit(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::DegenerateRange, "cannot normalize an empty sequence");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) {
    throw Error(ErrorCode::DegenerateRange, "constant sequence (value " + format_double(lo) +
                                                ") cannot be normalized");
  }
  const double range = hi - lo;
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    // Pin the extremes so min -> 0 and max -> 1 exactly.
    if (values[i] == lo) {
      out[i] = 0.0;
    } else if (values[i] == hi) {
      out[i] = 1.0;
    } else {
      out[i] = (values[i] - lo) / range;
    }
  }
  return out;
}

AlignedFrame::AlignedFrame(std::vector<double> timestamps, std::vector<std::string> names,
                           std::vector<std::vector<double>> columns)
    : timestamps_(std::move(timestamps)), names_(std::move(names)), columns_(std::move(columns)) {
  if (names_.size() != columns_.size()) {
    throw Error(ErrorCode::LengthMismatch, "frame has " + std::to_string(names_.size()) +
                                               " names for " + std::to_string(columns_.size()) +
                                               " columns");
  }
  for (std::size_t i = 1; i < timestamps_.size(); ++i) {
    if (!(timestamps_[i] > timestamps_[i - 1])) {
      throw Error(ErrorCode::InvalidSeries, "frame grid is not strictly increasing at row " +
                                                std::to_string(i));
    }
  }
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (columns_[c].size() != timestamps_.size()) {
      throw Error(ErrorCode::LengthMismatch, "column '" + names_[c] + "' has " +
                                                 std::to_string(columns_[c].size()) + " rows, grid has " +
                                                 std::to_string(timestamps_.size()));
    }
    for (std::size_t d = 0; d < c; ++d) {
      if (names_[d] == names_[c]) {
        throw Error(ErrorCode::InvalidArgument, "duplicate column '" + names_[c] + "'");
      }
    }
  }
}

bool AlignedFrame::has_column(std::string_view name) const noexcept {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::span<const double> AlignedFrame::column(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) {
    throw Error(ErrorCode::MissingColumn, "frame has no column '" + std::string(name) + "'");
  }
  return columns_[static_cast<std::size_t>(std::distance(names_.begin(), it))];
}

AlignedFrame AlignedFrame::filter_rows(double t0, double t1) const {
  std::vector<double> ts;
  std::vector<std::vector<double>> cols(columns_.size());
  for (std::size_t r = 0; r < timestamps_.size(); ++r) {
    if (timestamps_[r] < t0 || timestamps_[r] > t1) continue;
    ts.push_back(timestamps_[r]);
    for (std::size_t c = 0; c < columns_.size(); ++c) cols[c].push_back(columns_[c][r]);
  }
  return AlignedFrame(std::move(ts), names_, std::move(cols));
}

AlignedFrame AlignedFrame::select(std::span<const std::string> names) const {
  std::vector<std::vector<double>> cols;
  cols.reserve(names.size());
  for (const auto& name : names) {
    const auto col = column(name);
    cols.emplace_back(col.begin(), col.end());
  }
  return AlignedFrame(timestamps_, std::vector<std::string>(names.begin(), names.end()),
                      std::move(cols));
}

AlignedFrame align(std::span<const TimeSeries> series, const AlignOptions& options) {
  if (series.empty()) throw Error(ErrorCode::InvalidArgument, "nothing to align");
  const Span span = common_span(series);

  std::vector<double> grid;
  if (options.grid) {
    grid = *options.grid;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] >= span.lo && grid[i] <= span.hi)) {
        throw Error(ErrorCode::OutOfRange, "grid point " + format_double(grid[i]) +
                                               " outside common span [" + format_double(span.lo) +
                                               ", " + format_double(span.hi) + "]");
      }
      if (i > 0 && !(grid[i] > grid[i - 1])) {
        throw Error(ErrorCode::InvalidArgument, "explicit grid must be strictly increasing");
      }
    }
  } else if (options.reference) {
    const auto it = std::find_if(series.begin(), series.end(),
                                 [&](const TimeSeries& s) { return s.name() == *options.reference; });
    if (it == series.end()) {
      throw Error(ErrorCode::MissingColumn, "reference series '" + *options.reference + "' not given");
    }
    for (const auto& sample : it->samples()) {
      if (sample.t >= span.lo && sample.t <= span.hi) grid.push_back(sample.t);
    }
  } else {
    for (const auto& s : series) {
      for (const auto& sample : s.samples()) {
        if (sample.t >= span.lo && sample.t <= span.hi) grid.push_back(sample.t);
      }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  }

  if (options.max_gap) {
    const double max_gap = *options.max_gap;
    std::erase_if(grid, [&](double t) {
      return std::any_of(series.begin(), series.end(),
                         [&](const TimeSeries& s) { return inside_gap(s, t, max_gap); });
    });
  }

  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  names.reserve(series.size());
  columns.reserve(series.size());
  for (const auto& s : series) {
    names.push_back(s.name());
    std::vector<double> col(grid.size());
    for (std::size_t r = 0; r < grid.size(); ++r) col[r] = interpolate_at(s, grid[r]);
    columns.push_back(std::move(col));
  }
  return AlignedFrame(std::move(grid), std::move(names), std::move(columns));
}

}  // namespace nvdrift
