#include "nvdrift/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nvdrift/error.hpp"
#include "nvdrift/text_format.hpp"

namespace nvdrift {

LineFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, "linear_fit: x has " + std::to_string(x.size()) +
                                               " values, y has " + std::to_string(y.size()));
  }
  const std::size_t n = x.size();
  if (n < 2) throw Error(ErrorCode::TooFewSamples, "linear_fit needs at least 2 points");

  // Centered two-pass sums.
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    sxx += dx * dx;
    sxy += dx * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::DegenerateX, "linear_fit: x is constant");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

double slope_pair_correlation(SlopePair slopes) {
  const double a = std::abs(slopes.a);
  const double b = std::abs(slopes.b);
  if (a == 0.0 && b == 0.0) return 1.0;
  const double rel = 2.0 * std::abs(a - b) / (a + b);
  const bool opposite = (slopes.a > 0.0 && slopes.b < 0.0) || (slopes.a < 0.0 && slopes.b > 0.0);
  const double r = opposite ? rel - 1.0 : 1.0 - rel;
  return std::clamp(r, -1.0, 1.0);
}

SlopePair ranked_slopes(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::LengthMismatch, "slope_correlation: sequences differ in length (" +
                                               std::to_string(u.size()) + " vs " +
                                               std::to_string(v.size()) + ")");
  }
  if (u.size() < 2) throw Error(ErrorCode::TooFewSamples, "slope_correlation needs at least 2 samples");

  const auto nu = normalize_unit(u);
  const auto nv = normalize_unit(v);

  std::vector<std::size_t> order(nu.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return nu[i] > nu[j]; });

  std::vector<double> rank(order.size());
  std::vector<double> su(order.size());
  std::vector<double> sv(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    rank[k] = static_cast<double>(k);
    su[k] = nu[order[k]];
    sv[k] = nv[order[k]];
  }
  // The formula jumps between +1 and -1 around a zero slope, so a slope that
  // is zero up to summation roundoff must come out as exactly zero.
  const double tiny = 1e3 * std::numeric_limits<double>::epsilon() / static_cast<double>(order.size());
  const auto snap = [tiny](double slope) { return std::abs(slope) <= tiny ? 0.0 : slope; };
  return {snap(linear_fit(rank, su).slope), snap(linear_fit(rank, sv).slope)};
}

double slope_correlation(std::span<const double> u, std::span<const double> v) {
  return slope_pair_correlation(ranked_slopes(u, v));
}

double CorrelationMatrix::at(std::string_view row, std::string_view col) const {
  const auto index = [&](std::string_view name) {
    const auto it = std::find(variables.begin(), variables.end(), name);
    if (it == variables.end()) {
      throw Error(ErrorCode::MissingColumn, "matrix has no variable '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(std::distance(variables.begin(), it));
  };
  return entries[index(row)][index(col)];
}

double CorrelationMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      worst = std::max(worst, std::abs(entries[i][j] - entries[j][i]));
    }
  }
  return worst;
}

CorrelationMatrix correlation_matrix(const AlignedFrame& frame, std::span<const std::string> variables) {
  CorrelationMatrix m;
  if (variables.empty()) {
    m.variables = frame.column_names();
  } else {
    m.variables.assign(variables.begin(), variables.end());
  }
  const std::size_t n = m.variables.size();

  std::vector<std::span<const double>> cols;
  for (const auto& name : m.variables) {
    cols.push_back(frame.column(name));
    const auto [lo, hi] = std::minmax_element(cols.back().begin(), cols.back().end());
    if (cols.back().empty() || !(*hi > *lo)) {
      throw Error(ErrorCode::DegenerateRange, "column '" + name + "' is constant");
    }
  }

  m.entries.assign(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) m.entries[i][j] = slope_correlation(cols[i], cols[j]);
    }
  }
  return m;
}

std::string to_matrix_csv(const CorrelationMatrix& matrix) {
  std::string out = "variable";
  for (const auto& v : matrix.variables) out += "," + v;
  out += '\n';
  for (std::size_t i = 0; i < matrix.variables.size(); ++i) {
    out += matrix.variables[i];
    for (double e : matrix.entries[i]) {
      out += ',';
      out += format_double(e);
    }
    out += '\n';
  }
  return out;
}

std::string render_heatmap_ppm(const CorrelationMatrix& matrix, int cell) {
  const int n = static_cast<int>(matrix.variables.size());
  const int side = n * cell;
  std::string out = "P6\n" + std::to_string(side) + " " + std::to_string(side) + "\n255\n";
  out.reserve(out.size() + static_cast<std::size_t>(side) * side * 3);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const double v = std::clamp(matrix.entries[y / cell][x / cell], -1.0, 1.0);
      const auto fade = static_cast<unsigned char>(std::lround(255.0 * (1.0 - std::abs(v))));
      const unsigned char r = v >= 0 ? 255 : fade;
      const unsigned char b = v <= 0 ? 255 : fade;
      out += static_cast<char>(r);
      out += static_cast<char>(fade);
      out += static_cast<char>(b);
    }
  }
  return out;
}

}  // namespace nvdrift
