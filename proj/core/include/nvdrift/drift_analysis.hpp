#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>

#include "nvdrift/regression.hpp"
#include "nvdrift/timeseries.hpp"

namespace nvdrift {

/// Scan volume around the expected NV position, micrometers per axis.
struct TrackingWindow {
  double size_x = 1.0;
  double size_y = 0.7;
  double size_z = 3.0;

  /// Throws InvalidArgument unless all sizes are positive.
  void validate() const;
  /// Size for axis "X", "Y" or "Z"; nullopt for any other name.
  std::optional<double> size_for(std::string_view axis) const noexcept;
};

/// Full-range drift: (max - min of target) / (max - min of reference), signed
/// by the slope correlation of the two sequences (target as sort reference).
/// Both sequences must be sampled on the same grid.
double drift_rate(std::span<const double> target, std::span<const double> reference);

/// Series variant: ranges come from each series' own samples; the sign comes
/// from both series aligned on their union grid.
double drift_rate(const TimeSeries& target, const TimeSeries& reference);

/// Temperature change that moves a centered NV out of the window:
/// (window_size / 2) / |rate|. Throws ZeroRate or InvalidArgument.
double window_exit_threshold(double rate_um_per_c, double window_size_um);

/// Temperature change that detunes the resonance by half the FWHM, i.e. the
/// contrast halves: (fwhm / 2) / |freq_rate|. Throws ZeroRate or InvalidArgument.
double half_contrast_threshold(double fwhm_mhz, double freq_rate_khz_per_c);

struct DriftReport {
  /// um/degC for X, Y, Z; kHz/degC for nu_res. Full-range definition.
  std::map<std::string, double> rates;
  /// Supplementary: least-squares slope of target against T2.
  std::map<std::string, double> fitted_slope_rates;
  std::map<std::string, double> exit_thresholds;  // degC per axis
  std::optional<double> half_contrast_threshold;  // degC
  std::map<std::string, ResidualStats> residual_stats;
  std::map<std::string, double> in_window_fraction;
  double fwhm_mhz = 0.0;
  std::size_t rows = 0;
};

inline constexpr double kDefaultFwhmMhz = 1.55;

/// Scores models against a frame holding T1, T2 and every model target.
/// An axis counts as tracked on a row when |actual - predicted| < size/2.
/// Throws MissingColumn.
DriftReport evaluate_tracking(const std::map<std::string, QuadraticModel>& models,
                              const AlignedFrame& frame, const TrackingWindow& window,
                              double fwhm_mhz = kDefaultFwhmMhz);

std::string report_text(const DriftReport& report);
/// Rows of `quantity,axis,value,unit`.
std::string report_csv(const DriftReport& report);

}  // namespace nvdrift
