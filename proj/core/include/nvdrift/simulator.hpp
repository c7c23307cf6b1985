#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nvdrift/keyvalue.hpp"
#include "nvdrift/regression.hpp"
#include "nvdrift/timeseries.hpp"

namespace nvdrift {

struct PhysicalConstants {
  double gyromagnetic_ratio_ghz_per_t = 28.024;
  double zero_field_splitting_ghz = 2.869;
  double magnetic_field_t = 0.05;

  /// Lower spin transition: zero-field splitting minus the Zeeman shift.
  double resonance_anchor_ghz() const noexcept {
    return zero_field_splitting_ghz - gyromagnetic_ratio_ghz_per_t * magnetic_field_t;
  }
};

/// base + amplitude*sin(2*pi*t/period + phase) + trend*t + N(0, noise), then
/// quantized to the sensor least count. t counts from the scenario start.
struct TemperatureParams {
  double base = 0.0;            // degC
  double amplitude = 0.0;       // degC
  double period_s = 86400.0;
  double phase_rad = 0.0;
  double trend_per_day = 0.0;   // degC/day
  double noise_sigma = 0.0;     // degC
  double least_count = 0.01;    // degC
  double sample_interval_s = 20.0;
};

/// Step injected into Y and Z after `t_break_days`. The offsets are the
/// corrections that undo the step, so the simulator shifts by -offset and
/// correct_discontinuity(series, t_break, offset) restores the clean data.
struct DiscontinuityParams {
  double t_break_days = 3.0;
  double offset_y = -0.227;  // um
  double offset_z = 0.05;    // um
  double gap_s = 600.0;      // samples of every series inside (t_break, t_break+gap] are dropped
};

struct RabiScanParams {
  double f_start_ghz = 1.456;
  double f_stop_ghz = 1.460;
  int points = 17;
  double center_ghz = 1.458;
  double fwhm_mhz = 1.55;
  double peak_contrast = 30.0;  // percent above baseline
  double baseline = 1.0;        // percent
  double noise_fraction = 0.01; // multiplicative, 1 sigma
};

struct ScenarioConfig {
  double start_epoch = 1700000000.0;
  double duration_days = 10.0;
  TemperatureParams t1;
  TemperatureParams t2;
  /// Raw-basis coefficients per target name (X, Y, Z, nu_res).
  std::map<std::string, Coefficients> ground_truth_beta;
  /// Extra c*(T2 - mismatch_center_t2)^3 per target; zero keeps the truth
  /// inside the fitted model family.
  std::map<std::string, double> cubic_mismatch;
  double mismatch_center_t2 = 17.9;
  double position_noise_x = 0.02;  // um
  double position_noise_y = 0.02;
  double position_noise_z = 0.05;
  double freq_noise_mhz = 0.02;
  double position_interval_s = 400.0;
  double odmr_interval_s = 191.0;
  std::optional<DiscontinuityParams> discontinuity;
  RabiScanParams rabi;
  PhysicalConstants constants;
  std::uint64_t seed = 42;

  /// Ten-day scenario sized to the reference lab: T2 spans about 15.8-20.0 degC,
  /// T1 about 13.08-13.31 degC, drift rates near 1.533/0.178/0.682 um/degC and
  /// -517 kHz/degC.
  static ScenarioConfig defaults();

  /// Copy with every Gaussian noise term set to zero. Quantization stays.
  ScenarioConfig noiseless() const;

  /// Copy with the default cubic T2 mismatch terms switched on.
  ScenarioConfig with_model_mismatch() const;

  /// Throws InvalidArgument on non-positive intervals, least counts or duration.
  void validate() const;

  KeyValueFile to_keyvalue() const;
  /// Keys not present keep their default values.
  static ScenarioConfig from_keyvalue(const KeyValueFile& kv);
};

/// Nearest multiple of `least_count`, halves rounded away from zero.
double quantize(double value, double least_count);

struct TemperatureSeries {
  TimeSeries t1;
  TimeSeries t2;
};

TemperatureSeries simulate_temperatures(const ScenarioConfig& config, std::uint64_t seed);

struct TargetSeries {
  TimeSeries x;
  TimeSeries y;
  TimeSeries z;
  TimeSeries nu_res;
};

struct SimulatedTargets {
  TargetSeries observed;  // with noise and any injected discontinuity
  TargetSeries clean;     // noiseless model values at the same instants
};

/// Evaluates the ground-truth model on temperatures interpolated to each
/// position (every position_interval_s) and resonance (every odmr_interval_s)
/// instant, then adds noise and the optional Y/Z step.
SimulatedTargets simulate_targets(const ScenarioConfig& config, const TimeSeries& t1,
                                  const TimeSeries& t2, std::uint64_t seed);

struct RabiScan {
  std::vector<double> frequency_ghz;
  std::vector<double> contrast_percent;
};

RabiScan simulate_rabi_scan(const ScenarioConfig& config, std::uint64_t seed);

/// On-resonance Rabi trace, time in seconds, signal normalized to 1. Its sine
/// contrast equals the scan's peak plus baseline contrast.
struct RabiTrace {
  std::vector<double> time_s;
  std::vector<double> signal;
  double rabi_frequency_hz = 5e6;
};

RabiTrace simulate_rabi_trace(const ScenarioConfig& config, std::uint64_t seed);

struct SimulatedDataset {
  TemperatureSeries temperatures;
  SimulatedTargets targets;
  RabiScan rabi_scan;
  RabiTrace rabi_trace;

  /// T1, T2, X, Y, Z, nu_res (observed).
  std::vector<TimeSeries> observed_series() const;
};

/// Full scenario with config.seed. When a discontinuity with a gap is
/// configured, samples inside the gap are removed from every series.
SimulatedDataset simulate(const ScenarioConfig& config);

/// Key-value ground truth: betas, clean-data drift rates, break parameters.
KeyValueFile ground_truth(const ScenarioConfig& config, const SimulatedDataset& data);

}  // namespace nvdrift
