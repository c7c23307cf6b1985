#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>

#include "nvdrift/timeseries.hpp"

namespace nvdrift {

inline constexpr std::size_t kQuadraticTerms = 6;
using DesignRow = std::array<double, kQuadraticTerms>;
using Coefficients = std::array<double, kQuadraticTerms>;

/// (1, T1, T2, T1^2, T1*T2, T2^2), always in this order.
DesignRow design_row(double t1, double t2) noexcept;

/// Quadratic temperature model for one target:
///   target = b0 + b1*T1 + b2*T2 + b3*T1^2 + b4*T1*T2 + b5*T2^2
/// Coefficients are reported in the raw-temperature basis. The fit itself is
/// done on temperatures centered at `center_t1` / `center_t2`.
struct QuadraticModel {
  std::string target;
  Coefficients coefficients{};
  double center_t1 = 0.0;
  double center_t2 = 0.0;
  double train_t0 = 0.0;
  double train_t1 = 0.0;
  std::size_t n_train = 0;
  double rms_train = 0.0;
  int rank = static_cast<int>(kQuadraticTerms);
  bool rank_deficient = false;
};

/// Least-squares fit of `target` against the frame's T1 and T2 columns via a
/// complete orthogonal decomposition of the centered design matrix. A
/// rank-deficient design yields the minimum-norm solution (in the centered
/// basis) and sets `rank_deficient`.
/// Throws MissingColumn or InsufficientRows (fewer than 6 rows).
QuadraticModel fit_quadratic(const AlignedFrame& frame, std::string_view target);

double predict(const QuadraticModel& model, double t1, double t2) noexcept;

/// Converts coefficients expressed in centered temperatures (T1-c1, T2-c2)
/// to the raw-temperature basis.
Coefficients uncenter(const Coefficients& centered, double c1, double c2) noexcept;

struct ResidualStats {
  double max = 0.0;
  double mean = 0.0;
  double rms = 0.0;
  std::size_t count = 0;
};

ResidualStats summarize(std::span<const double> absolute_residuals) noexcept;

struct ResidualSeries {
  TimeSeries absolute;  // |actual - predicted| on the frame grid
  ResidualStats stats;
};

/// Throws MissingColumn, or EmptyResult on a frame without rows.
ResidualSeries residual_series(const QuadraticModel& model, const AlignedFrame& frame);

inline constexpr int kModelFormatVersion = 1;

std::string serialize_model(const QuadraticModel& model);
QuadraticModel parse_model(std::string_view text, std::string_view source = "<model>");
QuadraticModel load_model(const std::filesystem::path& path);

}  // namespace nvdrift
