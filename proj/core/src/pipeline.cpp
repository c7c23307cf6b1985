#include "nvdrift/pipeline.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "nvdrift/error.hpp"

namespace nvdrift {

std::vector<std::string> available_targets(const Dataset& data) {
  std::vector<std::string> out;
  for (const auto target : {var::kX, var::kY, var::kZ, var::kNuRes}) {
    if (data.contains(target)) out.emplace_back(target);
  }
  return out;
}

double dataset_start(const Dataset& data) {
  double start = std::numeric_limits<double>::infinity();
  for (const auto& s : data.series()) start = std::min(start, s.start());
  return start;
}

double split_time(const Dataset& data, double split_days) {
  return dataset_start(data) + split_days * kSecondsPerDay;
}

QuadraticModel train_target(const Dataset& data, std::string_view target, double t_split,
                            std::optional<double> max_gap) {
  const auto& y = data.get(target);
  const auto head = [&](const TimeSeries& s) { return restrict(s, s.start(), t_split); };
  const std::array<TimeSeries, 3> inputs{head(data.get(var::kT1)), head(data.get(var::kT2)), head(y)};
  AlignOptions options;
  options.reference = std::string(target);
  options.max_gap = max_gap;
  return fit_quadratic(align(inputs, options), target);
}

std::map<std::string, QuadraticModel> train_models(const Dataset& data, double t_split,
                                                   std::optional<double> max_gap) {
  const auto targets = available_targets(data);
  if (targets.empty()) {
    throw Error(ErrorCode::MissingColumn, "dataset has none of the targets X, Y, Z, nu_res");
  }
  std::map<std::string, QuadraticModel> models;
  for (const auto& target : targets) models.emplace(target, train_target(data, target, t_split, max_gap));
  return models;
}

AlignedFrame evaluation_frame(const Dataset& data, const std::vector<std::string>& targets, double t0,
                              double t1, std::optional<double> max_gap) {
  std::vector<TimeSeries> inputs{data.get(var::kT1), data.get(var::kT2)};
  for (const auto& t : targets) inputs.push_back(data.get(t));

  AlignOptions options;
  options.max_gap = max_gap;
  for (const auto axis : {var::kX, var::kY, var::kZ, var::kNuRes}) {
    if (std::find(targets.begin(), targets.end(), axis) != targets.end()) {
      options.reference = std::string(axis);
      break;
    }
  }
  return align(inputs, options).filter_rows(t0, t1);
}

DriftReport evaluate_dataset(const Dataset& data, const std::map<std::string, QuadraticModel>& models,
                             const TrackingWindow& window, double t0, double t1, double fwhm_mhz,
                             std::optional<double> max_gap) {
  DriftReport merged;
  merged.fwhm_mhz = fwhm_mhz;
  for (const auto& [name, model] : models) {
    const auto frame = evaluation_frame(data, {model.target}, t0, t1, max_gap);
    if (frame.rows() == 0) {
      throw Error(ErrorCode::EmptyResult, "no samples of '" + model.target + "' in the evaluation span");
    }
    const auto part = evaluate_tracking({{name, model}}, frame, window, fwhm_mhz);
    merged.rows = std::max(merged.rows, part.rows);
    merged.rates.insert(part.rates.begin(), part.rates.end());
    merged.fitted_slope_rates.insert(part.fitted_slope_rates.begin(), part.fitted_slope_rates.end());
    merged.exit_thresholds.insert(part.exit_thresholds.begin(), part.exit_thresholds.end());
    merged.residual_stats.insert(part.residual_stats.begin(), part.residual_stats.end());
    merged.in_window_fraction.insert(part.in_window_fraction.begin(), part.in_window_fraction.end());
    if (part.half_contrast_threshold) merged.half_contrast_threshold = part.half_contrast_threshold;
  }
  return merged;
}

}  // namespace nvdrift
