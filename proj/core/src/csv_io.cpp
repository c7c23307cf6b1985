#include "nvdrift/csv_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "nvdrift/error.hpp"
#include "nvdrift/text_format.hpp"

namespace nvdrift {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    cells.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                          : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return cells;
}

[[noreturn]] void parse_fail(std::string_view source, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError,
              std::string(source) + ":" + std::to_string(line) + ": " + what);
}

// Reads lines, strips CR and a leading UTF-8 BOM, skips blank lines.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (number_ == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!trim(line).empty()) return true;
    }
    return false;
  }

  std::size_t number() const { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

}  // namespace

void Dataset::put(TimeSeries series) {
  for (auto& existing : series_) {
    if (existing.name() == series.name()) {
      existing = std::move(series);
      return;
    }
  }
  series_.push_back(std::move(series));
}

bool Dataset::contains(std::string_view name) const noexcept {
  return std::any_of(series_.begin(), series_.end(),
                     [&](const TimeSeries& s) { return s.name() == name; });
}

const TimeSeries& Dataset::get(std::string_view name) const {
  for (const auto& s : series_) {
    if (s.name() == name) return s;
  }
  throw Error(ErrorCode::MissingColumn, "dataset has no series '" + std::string(name) + "'");
}

std::vector<std::string> Dataset::names() const {
  std::vector<std::string> out;
  for (const auto& s : series_) out.push_back(s.name());
  return out;
}

std::vector<TimeSeries> read_series_csv(std::istream& in, std::string_view source,
                                        std::string_view narrow_name) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) parse_fail(source, reader.number(), "missing header row");

  const auto header = split_commas(line);
  if (header.size() < 2 || header[0] != "timestamp") {
    parse_fail(source, reader.number(), "header must start with 'timestamp' and name at least one column");
  }
  std::vector<std::string> names;
  const bool narrow = header.size() == 2 && header[1] == "value";
  if (narrow) {
    names.emplace_back(narrow_name);
  } else {
    for (std::size_t c = 1; c < header.size(); ++c) {
      if (header[c].empty()) parse_fail(source, reader.number(), "empty column name");
      names.emplace_back(header[c]);
    }
  }

  std::vector<std::vector<Sample>> columns(names.size());
  while (reader.next(line)) {
    const auto cells = split_commas(line);
    if (cells.size() != header.size()) {
      parse_fail(source, reader.number(), "expected " + std::to_string(header.size()) +
                                              " cells, found " + std::to_string(cells.size()));
    }
    const auto t = parse_timestamp(cells[0]);
    if (!t) parse_fail(source, reader.number(), "bad timestamp '" + std::string(cells[0]) + "'");
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (cells[c].empty()) {
        if (narrow) parse_fail(source, reader.number(), "missing value");
        continue;
      }
      const auto v = parse_double(cells[c]);
      if (!v || !std::isfinite(*v)) {
        parse_fail(source, reader.number(), "bad value '" + std::string(cells[c]) + "' in column '" +
                                                names[c - 1] + "'");
      }
      columns[c - 1].push_back({*t, *v});
    }
  }

  std::vector<TimeSeries> out;
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (columns[c].empty()) continue;
    try {
      out.emplace_back(names[c], std::move(columns[c]));
    } catch (const Error& e) {
      throw Error(e.code(), std::string(source) + ": " + e.what());
    }
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<TimeSeries> read_series_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  return read_series_csv(in, path.string(), path.stem().string());
}

Dataset load_dataset(const std::filesystem::path& path) {
  Dataset data;
  if (std::filesystem::is_directory(path)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      std::ifstream in(file, std::ios::binary);
      std::string first;
      std::getline(in, first);
      if (first.rfind("\xEF\xBB\xBF", 0) == 0) first.erase(0, 3);
      if (first.rfind("timestamp,", 0) != 0) continue;
      for (auto& s : read_series_file(file)) data.put(std::move(s));
    }
  } else {
    for (auto& s : read_series_file(path)) data.put(std::move(s));
  }
  if (data.empty()) {
    throw Error(ErrorCode::ParseError, "no time series found in '" + path.string() + "'");
  }
  return data;
}

std::span<const double> NumericTable::column(std::string_view name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return columns[c];
  }
  throw Error(ErrorCode::MissingColumn, "table has no column '" + std::string(name) + "'");
}

NumericTable read_numeric_csv(std::istream& in, std::string_view source) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) parse_fail(source, reader.number(), "missing header row");
  NumericTable table;
  for (auto cell : split_commas(line)) table.header.emplace_back(cell);
  table.columns.resize(table.header.size());
  while (reader.next(line)) {
    const auto cells = split_commas(line);
    if (cells.size() != table.header.size()) {
      parse_fail(source, reader.number(), "expected " + std::to_string(table.header.size()) +
                                              " cells, found " + std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = parse_double(cells[c]);
      if (!v || !std::isfinite(*v)) {
        parse_fail(source, reader.number(), "bad number '" + std::string(cells[c]) + "'");
      }
      table.columns[c].push_back(*v);
    }
  }
  return table;
}

NumericTable read_numeric_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  return read_numeric_csv(in, path.string());
}

std::string to_narrow_csv(const TimeSeries& series) {
  std::string out = "timestamp,value\n";
  for (const auto& s : series.samples()) {
    out += format_double(s.t);
    out += ',';
    out += format_double(s.value);
    out += '\n';
  }
  return out;
}

std::string to_wide_csv(std::span<const TimeSeries> series) {
  std::map<double, std::vector<const double*>> rows;
  for (std::size_t c = 0; c < series.size(); ++c) {
    for (const auto& s : series[c].samples()) {
      auto& row = rows[s.t];
      row.resize(series.size(), nullptr);
      row[c] = &s.value;
    }
  }
  std::string out = "timestamp";
  for (const auto& s : series) out += "," + s.name();
  out += '\n';
  for (auto& [t, row] : rows) {
    row.resize(series.size(), nullptr);
    out += format_double(t);
    for (const double* v : row) {
      out += ',';
      if (v) out += format_double(*v);
    }
    out += '\n';
  }
  return out;
}

std::string to_frame_csv(const AlignedFrame& frame) {
  std::string out = "timestamp";
  for (const auto& name : frame.column_names()) out += "," + name;
  out += '\n';
  std::vector<std::span<const double>> cols;
  for (const auto& name : frame.column_names()) cols.push_back(frame.column(name));
  const auto ts = frame.timestamps();
  for (std::size_t r = 0; r < frame.rows(); ++r) {
    out += format_double(ts[r]);
    for (const auto& col : cols) {
      out += ',';
      out += format_double(col[r]);
    }
    out += '\n';
  }
  return out;
}

std::string to_table_csv(const NumericTable& table) {
  std::string out;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) out += ',';
    out += table.header[c];
  }
  out += '\n';
  const std::size_t rows = table.columns.empty() ? 0 : table.columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out += ',';
      out += format_double(table.columns[c][r]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace nvdrift
