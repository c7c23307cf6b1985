#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nvdrift/csv_io.hpp"
#include "nvdrift/drift_analysis.hpp"
#include "nvdrift/regression.hpp"

namespace nvdrift {

inline constexpr double kSecondsPerDay = 86400.0;
inline constexpr double kDefaultSplitDays = 2.5;

/// Target variables present in the dataset, in X, Y, Z, nu_res order.
std::vector<std::string> available_targets(const Dataset& data);

/// Earliest sample time over all series.
double dataset_start(const Dataset& data);

/// dataset_start + split_days.
double split_time(const Dataset& data, double split_days = kDefaultSplitDays);

/// Temperatures are interpolated onto the target's own sample times up to
/// `t_split` (inclusive) and one quadratic model is fitted.
QuadraticModel train_target(const Dataset& data, std::string_view target, double t_split,
                            std::optional<double> max_gap = std::nullopt);

/// One independent model per available target.
std::map<std::string, QuadraticModel> train_models(const Dataset& data, double t_split,
                                                   std::optional<double> max_gap = std::nullopt);

/// T1, T2 and `targets` aligned on the sample times of the first position
/// target present (nu_res otherwise), keeping rows with t0 <= t <= t1.
AlignedFrame evaluation_frame(const Dataset& data, const std::vector<std::string>& targets, double t0,
                              double t1, std::optional<double> max_gap = std::nullopt);

/// Scores every model on its own target's sample times within [t0, t1] and
/// merges the per-target reports into one.
DriftReport evaluate_dataset(const Dataset& data, const std::map<std::string, QuadraticModel>& models,
                             const TrackingWindow& window, double t0, double t1,
                             double fwhm_mhz = kDefaultFwhmMhz,
                             std::optional<double> max_gap = std::nullopt);

}  // namespace nvdrift
