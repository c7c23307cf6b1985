#include "nvdrift/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nvdrift/drift_analysis.hpp"
#include "nvdrift/error.hpp"
#include "nvdrift/random.hpp"
#include "nvdrift/text_format.hpp"

namespace nvdrift {

namespace {

constexpr double kDay = 86400.0;

// Independent noise streams so that toggling one feature never reshuffles the
// noise of another.
enum Stream : std::uint64_t {
  kStreamT1 = 1,
  kStreamT2 = 2,
  kStreamX = 3,
  kStreamY = 4,
  kStreamZ = 5,
  kStreamNu = 6,
  kStreamRabiScan = 7,
  kStreamRabiTrace = 8,
};

std::vector<double> sample_times(double start, double duration_s, double interval) {
  std::vector<double> t;
  const auto count = static_cast<std::size_t>(std::floor(duration_s / interval + 1e-9));
  t.reserve(count + 1);
  for (std::size_t k = 0; k <= count; ++k) t.push_back(start + static_cast<double>(k) * interval);
  return t;
}

TimeSeries temperature_series(const std::string& name, const TemperatureParams& p, double start,
                              double duration_s, Rng rng) {
  const auto times = sample_times(start, duration_s, p.sample_interval_s);
  std::vector<double> values(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double rel = times[i] - start;
    double v = p.base + p.amplitude * std::sin(2.0 * std::numbers::pi * rel / p.period_s + p.phase_rad) +
               p.trend_per_day * rel / kDay;
    if (p.noise_sigma > 0.0) v += p.noise_sigma * rng.normal();
    values[i] = quantize(v, p.least_count);
  }
  return TimeSeries(name, times, values);
}

struct TargetSpec {
  std::string_view name;
  double interval;
  double sigma;
  Stream stream;
};

std::string join_coefficients(const Coefficients& c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ',';
    out += format_double(c[i]);
  }
  return out;
}

Coefficients parse_coefficients(std::string_view text, std::string_view key) {
  Coefficients c{};
  std::size_t i = 0;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    const auto cell = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    const auto v = parse_double(cell);
    if (!v || i >= c.size()) {
      throw Error(ErrorCode::ParseError, "config key '" + std::string(key) +
                                             "' needs 6 comma-separated numbers");
    }
    c[i++] = *v;
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (i != c.size()) {
    throw Error(ErrorCode::ParseError, "config key '" + std::string(key) + "' needs 6 numbers");
  }
  return c;
}

void put_temperature(KeyValueFile& kv, const std::string& prefix, const TemperatureParams& p) {
  kv.set(prefix + ".base", p.base);
  kv.set(prefix + ".amplitude", p.amplitude);
  kv.set(prefix + ".period_s", p.period_s);
  kv.set(prefix + ".phase_rad", p.phase_rad);
  kv.set(prefix + ".trend_per_day", p.trend_per_day);
  kv.set(prefix + ".noise_sigma", p.noise_sigma);
  kv.set(prefix + ".least_count", p.least_count);
  kv.set(prefix + ".sample_interval_s", p.sample_interval_s);
}

TemperatureParams get_temperature(const KeyValueFile& kv, const std::string& prefix, TemperatureParams p) {
  p.base = kv.get_double_or(prefix + ".base", p.base);
  p.amplitude = kv.get_double_or(prefix + ".amplitude", p.amplitude);
  p.period_s = kv.get_double_or(prefix + ".period_s", p.period_s);
  p.phase_rad = kv.get_double_or(prefix + ".phase_rad", p.phase_rad);
  p.trend_per_day = kv.get_double_or(prefix + ".trend_per_day", p.trend_per_day);
  p.noise_sigma = kv.get_double_or(prefix + ".noise_sigma", p.noise_sigma);
  p.least_count = kv.get_double_or(prefix + ".least_count", p.least_count);
  p.sample_interval_s = kv.get_double_or(prefix + ".sample_interval_s", p.sample_interval_s);
  return p;
}

const std::array<std::string_view, 4> kTargets{var::kX, var::kY, var::kZ, var::kNuRes};

}  // namespace

double quantize(double value, double least_count) {
  if (!(least_count > 0.0)) throw Error(ErrorCode::InvalidArgument, "least count must be positive");
  // Decimal least counts (0.01, 0.02, ...) have an integer reciprocal; dividing
  // by it returns the correctly rounded decimal multiple.
  const double inverse = 1.0 / least_count;
  const double k = std::round(inverse);
  const bool integral_inverse = std::abs(inverse - k) < 1e-9 * k;
  const double steps = integral_inverse ? value * k : value / least_count;
  double n = std::round(steps);  // halves away from zero
  const double frac = std::abs(steps) - std::floor(std::abs(steps));
  if (std::abs(frac - 0.5) < 1e-9) n = std::copysign(std::floor(std::abs(steps)) + 1.0, steps);
  if (n == 0.0) return 0.0;
  return integral_inverse ? n / k : n * least_count;
}

ScenarioConfig ScenarioConfig::defaults() {
  ScenarioConfig c;
  c.t1 = {.base = 13.19,
          .amplitude = 0.08,
          .period_s = kDay,
          .phase_rad = -1.2,
          .trend_per_day = 0.003,
          .noise_sigma = 0.005,
          .least_count = 0.01,
          .sample_interval_s = 20.0};
  c.t2 = {.base = 17.0,
          .amplitude = 1.2,
          .period_s = kDay,
          .phase_rad = -std::numbers::pi / 2.0,
          .trend_per_day = 0.1895,
          .noise_sigma = 0.01,
          .least_count = 0.02,
          .sample_interval_s = 20.0};
  // Raw-basis expansions of models written around T1 = 13.2, T2 = 17.9 degC:
  //   X:      2.0    + 0.9 dT1    - 1.59 dT2    + 0.5 dT1^2  - 0.15 dT1dT2  + 0.025 dT2^2
  //   Y:     -1.0    - 0.3 dT1    + 0.192 dT2   - 0.2 dT1^2  + 0.05 dT1dT2  - 0.006 dT2^2
  //   Z:      0.5    + 0.4 dT1    - 0.706 dT2   + 0.3 dT1^2  - 0.08 dT1dT2  + 0.012 dT2^2
  //   nu:     1.4678 + 1e-4 dT1   - 5.28e-4 dT2 + 2e-5 dT1^2 - 1e-5 dT1dT2  + 4e-6 dT2^2
  // The T2 slopes make the full-range drift rates come out near 1.533, 0.178,
  // 0.682 um/degC and 517 kHz/degC; the nu intercept is the resonance anchor.
  c.ground_truth_beta[std::string(var::kX)] = {78.26925, -9.615, -0.505, 0.5, -0.15, 0.025};
  c.ground_truth_beta[std::string(var::kY)] = {-25.43326, 4.085, -0.2532, -0.2, 0.05, -0.006};
  c.ground_truth_beta[std::string(var::kZ)] = {45.07192, -6.088, -0.0796, 0.3, -0.08, 0.012};
  c.ground_truth_beta[std::string(var::kNuRes)] = {1.47833484, -0.000249, -0.0005392,
                                                   2e-05, -1e-05, 4e-06};
  for (const auto target : kTargets) c.cubic_mismatch[std::string(target)] = 0.0;
  return c;
}

ScenarioConfig ScenarioConfig::noiseless() const {
  ScenarioConfig c = *this;
  c.t1.noise_sigma = 0.0;
  c.t2.noise_sigma = 0.0;
  c.position_noise_x = 0.0;
  c.position_noise_y = 0.0;
  c.position_noise_z = 0.0;
  c.freq_noise_mhz = 0.0;
  c.rabi.noise_fraction = 0.0;
  return c;
}

ScenarioConfig ScenarioConfig::with_model_mismatch() const {
  ScenarioConfig c = *this;
  c.cubic_mismatch[std::string(var::kX)] = 0.01;
  c.cubic_mismatch[std::string(var::kY)] = 0.004;
  c.cubic_mismatch[std::string(var::kZ)] = 0.01;
  c.cubic_mismatch[std::string(var::kNuRes)] = 2e-6;
  return c;
}

void ScenarioConfig::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive");
    }
  };
  positive(duration_days, "duration_days");
  positive(t1.sample_interval_s, "t1.sample_interval_s");
  positive(t2.sample_interval_s, "t2.sample_interval_s");
  positive(t1.least_count, "t1.least_count");
  positive(t2.least_count, "t2.least_count");
  positive(t1.period_s, "t1.period_s");
  positive(t2.period_s, "t2.period_s");
  positive(position_interval_s, "position_interval_s");
  positive(odmr_interval_s, "odmr_interval_s");
  if (rabi.points < 5) throw Error(ErrorCode::InvalidArgument, "rabi.points must be at least 5");
  if (!(rabi.f_stop_ghz > rabi.f_start_ghz)) {
    throw Error(ErrorCode::InvalidArgument, "rabi.f_stop_ghz must exceed rabi.f_start_ghz");
  }
  positive(rabi.fwhm_mhz, "rabi.fwhm_mhz");
  for (const auto target : kTargets) {
    if (!ground_truth_beta.contains(std::string(target))) {
      throw Error(ErrorCode::InvalidArgument, "missing ground-truth coefficients for " + std::string(target));
    }
  }
  if (discontinuity && discontinuity->gap_s < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "discontinuity.gap_s must not be negative");
  }
}

KeyValueFile ScenarioConfig::to_keyvalue() const {
  KeyValueFile kv;
  kv.set("start_epoch", start_epoch);
  kv.set("duration_days", duration_days);
  put_temperature(kv, "t1", t1);
  put_temperature(kv, "t2", t2);
  for (const auto& [k, b] : ground_truth_beta) kv.set("beta." + k, join_coefficients(b));
  for (const auto& [k, v] : cubic_mismatch) kv.set("mismatch." + k, v);
  kv.set("mismatch.center_t2", mismatch_center_t2);
  kv.set("noise.X", position_noise_x);
  kv.set("noise.Y", position_noise_y);
  kv.set("noise.Z", position_noise_z);
  kv.set("noise.nu_res_mhz", freq_noise_mhz);
  kv.set("position_interval_s", position_interval_s);
  kv.set("odmr_interval_s", odmr_interval_s);
  kv.set("discontinuity.enabled", discontinuity.has_value());
  const DiscontinuityParams d = discontinuity.value_or(DiscontinuityParams{});
  kv.set("discontinuity.t_break_days", d.t_break_days);
  kv.set("discontinuity.offset_y", d.offset_y);
  kv.set("discontinuity.offset_z", d.offset_z);
  kv.set("discontinuity.gap_s", d.gap_s);
  kv.set("rabi.f_start_ghz", rabi.f_start_ghz);
  kv.set("rabi.f_stop_ghz", rabi.f_stop_ghz);
  kv.set("rabi.points", std::int64_t{rabi.points});
  kv.set("rabi.center_ghz", rabi.center_ghz);
  kv.set("rabi.fwhm_mhz", rabi.fwhm_mhz);
  kv.set("rabi.peak_contrast", rabi.peak_contrast);
  kv.set("rabi.baseline", rabi.baseline);
  kv.set("rabi.noise_fraction", rabi.noise_fraction);
  kv.set("constants.gyromagnetic_ratio_ghz_per_t", constants.gyromagnetic_ratio_ghz_per_t);
  kv.set("constants.zero_field_splitting_ghz", constants.zero_field_splitting_ghz);
  kv.set("constants.magnetic_field_t", constants.magnetic_field_t);
  kv.set("seed", static_cast<std::int64_t>(seed));
  return kv;
}

ScenarioConfig ScenarioConfig::from_keyvalue(const KeyValueFile& kv) {
  ScenarioConfig c = defaults();
  c.start_epoch = kv.get_double_or("start_epoch", c.start_epoch);
  c.duration_days = kv.get_double_or("duration_days", c.duration_days);
  c.t1 = get_temperature(kv, "t1", c.t1);
  c.t2 = get_temperature(kv, "t2", c.t2);
  for (const auto target : kTargets) {
    const std::string key = "beta." + std::string(target);
    if (auto text = kv.find(key)) c.ground_truth_beta[std::string(target)] = parse_coefficients(*text, key);
    c.cubic_mismatch[std::string(target)] =
        kv.get_double_or("mismatch." + std::string(target), c.cubic_mismatch[std::string(target)]);
  }
  c.mismatch_center_t2 = kv.get_double_or("mismatch.center_t2", c.mismatch_center_t2);
  c.position_noise_x = kv.get_double_or("noise.X", c.position_noise_x);
  c.position_noise_y = kv.get_double_or("noise.Y", c.position_noise_y);
  c.position_noise_z = kv.get_double_or("noise.Z", c.position_noise_z);
  c.freq_noise_mhz = kv.get_double_or("noise.nu_res_mhz", c.freq_noise_mhz);
  c.position_interval_s = kv.get_double_or("position_interval_s", c.position_interval_s);
  c.odmr_interval_s = kv.get_double_or("odmr_interval_s", c.odmr_interval_s);
  if (kv.get_bool_or("discontinuity.enabled", false)) {
    DiscontinuityParams d;
    d.t_break_days = kv.get_double_or("discontinuity.t_break_days", d.t_break_days);
    d.offset_y = kv.get_double_or("discontinuity.offset_y", d.offset_y);
    d.offset_z = kv.get_double_or("discontinuity.offset_z", d.offset_z);
    d.gap_s = kv.get_double_or("discontinuity.gap_s", d.gap_s);
    c.discontinuity = d;
  }
  c.rabi.f_start_ghz = kv.get_double_or("rabi.f_start_ghz", c.rabi.f_start_ghz);
  c.rabi.f_stop_ghz = kv.get_double_or("rabi.f_stop_ghz", c.rabi.f_stop_ghz);
  c.rabi.points = static_cast<int>(kv.get_int_or("rabi.points", c.rabi.points));
  c.rabi.center_ghz = kv.get_double_or("rabi.center_ghz", c.rabi.center_ghz);
  c.rabi.fwhm_mhz = kv.get_double_or("rabi.fwhm_mhz", c.rabi.fwhm_mhz);
  c.rabi.peak_contrast = kv.get_double_or("rabi.peak_contrast", c.rabi.peak_contrast);
  c.rabi.baseline = kv.get_double_or("rabi.baseline", c.rabi.baseline);
  c.rabi.noise_fraction = kv.get_double_or("rabi.noise_fraction", c.rabi.noise_fraction);
  c.constants.gyromagnetic_ratio_ghz_per_t =
      kv.get_double_or("constants.gyromagnetic_ratio_ghz_per_t", c.constants.gyromagnetic_ratio_ghz_per_t);
  c.constants.zero_field_splitting_ghz =
      kv.get_double_or("constants.zero_field_splitting_ghz", c.constants.zero_field_splitting_ghz);
  c.constants.magnetic_field_t = kv.get_double_or("constants.magnetic_field_t", c.constants.magnetic_field_t);
  const auto seed = kv.get_int_or("seed", static_cast<std::int64_t>(c.seed));
  if (seed < 0) throw Error(ErrorCode::ParseError, "seed must not be negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.validate();
  return c;
}

TemperatureSeries simulate_temperatures(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  const double duration_s = config.duration_days * kDay;
  return {temperature_series(std::string(var::kT1), config.t1, config.start_epoch, duration_s,
                             Rng(seed, kStreamT1)),
          temperature_series(std::string(var::kT2), config.t2, config.start_epoch, duration_s,
                             Rng(seed, kStreamT2))};
}

SimulatedTargets simulate_targets(const ScenarioConfig& config, const TimeSeries& t1,
                                  const TimeSeries& t2, std::uint64_t seed) {
  config.validate();
  const double duration_s = config.duration_days * kDay;
  const std::array<TargetSpec, 4> specs{{
      {var::kX, config.position_interval_s, config.position_noise_x, kStreamX},
      {var::kY, config.position_interval_s, config.position_noise_y, kStreamY},
      {var::kZ, config.position_interval_s, config.position_noise_z, kStreamZ},
      {var::kNuRes, config.odmr_interval_s, config.freq_noise_mhz * 1e-3, kStreamNu},
  }};
  const double lo = std::max(t1.start(), t2.start());
  const double hi = std::min(t1.end(), t2.end());

  std::vector<TimeSeries> observed;
  std::vector<TimeSeries> clean;
  for (const auto& spec : specs) {
    const std::string name(spec.name);
    const Coefficients& beta = config.ground_truth_beta.at(name);
    const auto mm = config.cubic_mismatch.find(name);
    const double cubic = mm == config.cubic_mismatch.end() ? 0.0 : mm->second;
    Rng rng(seed, spec.stream);

    std::vector<double> times;
    for (double t : sample_times(config.start_epoch, duration_s, spec.interval)) {
      if (t >= lo && t <= hi) times.push_back(t);
    }
    std::vector<double> truth(times.size());
    std::vector<double> seen(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double a = interpolate_at(t1, times[i]);
      const double b = interpolate_at(t2, times[i]);
      const auto row = design_row(a, b);
      double v = 0.0;
      for (std::size_t k = 0; k < kQuadraticTerms; ++k) v += row[k] * beta[k];
      if (cubic != 0.0) {
        const double d = b - config.mismatch_center_t2;
        v += cubic * d * d * d;
      }
      truth[i] = v;
      seen[i] = spec.sigma > 0.0 ? v + spec.sigma * rng.normal() : v;
    }
    clean.emplace_back(name, times, truth);

    TimeSeries obs(name, times, seen);
    if (config.discontinuity && (spec.name == var::kY || spec.name == var::kZ)) {
      const auto& d = *config.discontinuity;
      const double t_break = config.start_epoch + d.t_break_days * kDay;
      const double correction = spec.name == var::kY ? d.offset_y : d.offset_z;
      if (t_break >= obs.start() && t_break <= obs.end()) {
        obs = correct_discontinuity(obs, t_break, -correction);
      }
    }
    observed.push_back(std::move(obs));
  }
  return {{observed[0], observed[1], observed[2], observed[3]},
          {clean[0], clean[1], clean[2], clean[3]}};
}

RabiScan simulate_rabi_scan(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  const auto& p = config.rabi;
  Rng rng(seed, kStreamRabiScan);
  RabiScan scan;
  const double half = 0.5 * p.fwhm_mhz;
  for (int i = 0; i < p.points; ++i) {
    const double f = p.f_start_ghz + (p.f_stop_ghz - p.f_start_ghz) * i / (p.points - 1);
    const double dx = (f - p.center_ghz) * 1e3;
    double c = p.baseline + p.peak_contrast * half * half / (dx * dx + half * half);
    if (p.noise_fraction > 0.0) c *= 1.0 + p.noise_fraction * rng.normal();
    scan.frequency_ghz.push_back(f);
    scan.contrast_percent.push_back(c);
  }
  return scan;
}

RabiTrace simulate_rabi_trace(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  constexpr int kSamples = 200;
  constexpr double kDuration = 1e-6;  // s
  Rng rng(seed, kStreamRabiTrace);
  RabiTrace trace;
  const double amplitude = 0.5 * (config.rabi.peak_contrast + config.rabi.baseline) / 100.0;
  const double noise = config.rabi.noise_fraction * 0.2 * amplitude;
  for (int i = 0; i < kSamples; ++i) {
    const double t = kDuration * i / kSamples;
    double s = 1.0 + amplitude * std::sin(2.0 * std::numbers::pi * trace.rabi_frequency_hz * t + 0.5 * std::numbers::pi);
    if (noise > 0.0) s += noise * rng.normal();
    trace.time_s.push_back(t);
    trace.signal.push_back(s);
  }
  return trace;
}

std::vector<TimeSeries> SimulatedDataset::observed_series() const {
  return {temperatures.t1, temperatures.t2, targets.observed.x,
          targets.observed.y, targets.observed.z, targets.observed.nu_res};
}

SimulatedDataset simulate(const ScenarioConfig& config) {
  config.validate();
  auto temperatures = simulate_temperatures(config, config.seed);
  auto targets = simulate_targets(config, temperatures.t1, temperatures.t2, config.seed);
  SimulatedDataset data{std::move(temperatures), std::move(targets),
                        simulate_rabi_scan(config, config.seed),
                        simulate_rabi_trace(config, config.seed)};

  if (config.discontinuity && config.discontinuity->gap_s > 0.0) {
    const double lo = config.start_epoch + config.discontinuity->t_break_days * kDay;
    const double hi = lo + config.discontinuity->gap_s;
    auto drop = [&](TimeSeries& s) {
      std::vector<Sample> kept;
      for (const auto& sample : s.samples()) {
        if (!(sample.t > lo && sample.t <= hi)) kept.push_back(sample);
      }
      s = TimeSeries(s.name(), std::move(kept));
    };
    for (TimeSeries* s : {&data.temperatures.t1, &data.temperatures.t2, &data.targets.observed.x,
                          &data.targets.observed.y, &data.targets.observed.z, &data.targets.observed.nu_res,
                          &data.targets.clean.x, &data.targets.clean.y, &data.targets.clean.z,
                          &data.targets.clean.nu_res}) {
      drop(*s);
    }
  }
  return data;
}

KeyValueFile ground_truth(const ScenarioConfig& config, const SimulatedDataset& data) {
  KeyValueFile kv;
  kv.set("format_version", std::int64_t{1});
  kv.set("seed", static_cast<std::int64_t>(config.seed));
  for (const auto& [k, b] : config.ground_truth_beta) kv.set("beta." + k, join_coefficients(b));
  for (const auto& [k, v] : config.cubic_mismatch) kv.set("mismatch." + k, v);
  const auto& clean = data.targets.clean;
  const auto& t2 = data.temperatures.t2;
  kv.set("rate.X_um_per_c", drift_rate(clean.x, t2));
  kv.set("rate.Y_um_per_c", drift_rate(clean.y, t2));
  kv.set("rate.Z_um_per_c", drift_rate(clean.z, t2));
  kv.set("rate.nu_res_khz_per_c", drift_rate(clean.nu_res, t2) * 1e6);
  kv.set("resonance_anchor_ghz", config.constants.resonance_anchor_ghz());
  kv.set("rabi.center_ghz", config.rabi.center_ghz);
  kv.set("rabi.fwhm_mhz", config.rabi.fwhm_mhz);
  kv.set("discontinuity.enabled", config.discontinuity.has_value());
  if (config.discontinuity) {
    kv.set("discontinuity.t_break", config.start_epoch + config.discontinuity->t_break_days * kDay);
    kv.set("discontinuity.offset_y", config.discontinuity->offset_y);
    kv.set("discontinuity.offset_z", config.discontinuity->offset_z);
  }
  return kv;
}

}  // namespace nvdrift
