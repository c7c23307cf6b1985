#pragma once

#include <span>
#include <string>
#include <vector>

#include "nvdrift/timeseries.hpp"

namespace nvdrift {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least-squares line y ~ slope*x + intercept.
/// Throws LengthMismatch, TooFewSamples (n < 2) or DegenerateX (constant x).
LineFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Slopes of the reference variable (a) and the compared variable (b) after
/// both were normalized and reordered by decreasing reference value.
struct SlopePair {
  double a = 0.0;
  double b = 0.0;
};

/// Maps a slope pair into [-1, 1]:
///   same sign:      1 - 2||a|-|b|| / (|a|+|b|)
///   opposite signs: 2||a|-|b|| / (|a|+|b|) - 1
/// A zero slope counts as matching either sign; two zero slopes give 1.
double slope_pair_correlation(SlopePair slopes);

/// Normalizes u and v to [0,1], stably sorts sample indices by decreasing u,
/// reorders v the same way and fits both against rank 0..n-1.
SlopePair ranked_slopes(std::span<const double> u, std::span<const double> v);

/// Slope-based correlation with `u` as the sort reference.
double slope_correlation(std::span<const double> u, std::span<const double> v);

struct CorrelationMatrix {
  std::vector<std::string> variables;
  /// entries[i][j]: variable i is the sort reference. Not necessarily symmetric.
  std::vector<std::vector<double>> entries;

  double at(std::size_t i, std::size_t j) const { return entries[i][j]; }
  double at(std::string_view row, std::string_view col) const;
  double max_asymmetry() const;
};

/// All pairs of `variables` (every frame column when empty). The diagonal is
/// exactly 1. Throws DegenerateRange naming any constant column.
CorrelationMatrix correlation_matrix(const AlignedFrame& frame,
                                     std::span<const std::string> variables = {});

std::string to_matrix_csv(const CorrelationMatrix& matrix);

/// Binary PPM heat map (blue = -1, white = 0, red = +1), `cell` pixels per entry.
std::string render_heatmap_ppm(const CorrelationMatrix& matrix, int cell = 32);

}  // namespace nvdrift
