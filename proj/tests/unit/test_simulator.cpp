#include <gtest/gtest.h>

#include <cmath>

#include "expect_error.hpp"
#include "generators.hpp"
#include "nvdrift/curvefit.hpp"
#include "nvdrift/drift_analysis.hpp"
#include "nvdrift/pipeline.hpp"
#include "nvdrift/simulator.hpp"

using namespace nvdrift;
using nvdrift::testing::Gen;

namespace {

Dataset as_dataset(const SimulatedDataset& d) {
  Dataset out;
  for (const auto& s : d.observed_series()) out.put(s);
  return out;
}

double min_of(const TimeSeries& s) {
  const auto v = s.values();
  return *std::min_element(v.begin(), v.end());
}
double max_of(const TimeSeries& s) {
  const auto v = s.values();
  return *std::max_element(v.begin(), v.end());
}

}  // namespace

TEST(Quantize, TieRuleExamples) {
  EXPECT_EQ(quantize(13.084, 0.01), 13.08);
  EXPECT_EQ(quantize(17.53, 0.02), 17.54);
  EXPECT_EQ(quantize(-0.015, 0.01), -0.02);
  EXPECT_EQ(quantize(0.015, 0.01), 0.02);
  EXPECT_NVDRIFT_ERROR(quantize(1.0, 0.0), ErrorCode::InvalidArgument);
}

TEST(Quantize, PropertyWithinHalfLeastCount) {
  Gen g(81);
  for (int trial = 0; trial < 5000; ++trial) {
    const double lc = g.coin() ? 0.01 : 0.02;
    const double v = g.uniform(-30, 30);
    ASSERT_LE(std::abs(quantize(v, lc) - v), lc / 2 + 1e-12) << v;
  }
}

TEST(Temperatures, FlatParametersGiveConstantBase) {
  auto c = ScenarioConfig::defaults();
  c.t1 = TemperatureParams{13.084, 0, 86400, 0, 0, 0, 0.01, 20};
  c.duration_days = 0.5;
  const auto temps = simulate_temperatures(c, 1);
  for (const auto& s : temps.t1.samples()) ASSERT_EQ(s.value, 13.08);
}

TEST(Temperatures, DefaultRangeGolden) {
  const auto temps = simulate_temperatures(ScenarioConfig::defaults(), 42);
  const double lo = min_of(temps.t2), hi = max_of(temps.t2);
  EXPECT_NEAR(lo, 15.8, 0.3);
  EXPECT_NEAR(hi, 20.0, 0.3);
  EXPECT_EQ(lo, 15.78);
  EXPECT_EQ(hi, 20.02);
}

TEST(Temperatures, PropertyEveryEmittedSampleOnTheLeastCountGrid) {
  const auto c = ScenarioConfig::defaults();
  const auto temps = simulate_temperatures(c, 7);
  for (const auto* s : {&temps.t1, &temps.t2}) {
    const double lc = s == &temps.t1 ? c.t1.least_count : c.t2.least_count;
    for (const auto& x : s->samples()) {
      const double steps = x.value / lc;
      ASSERT_NEAR(steps, std::round(steps), 1e-6) << x.value;
    }
  }
}

TEST(Simulate, SameSeedBitIdenticalDifferentSeedDiffers) {
  auto c = ScenarioConfig::defaults();
  c.duration_days = 2;
  const auto a = simulate(c);
  const auto b = simulate(c);
  EXPECT_EQ(a.observed_series(), b.observed_series());
  EXPECT_EQ(a.rabi_scan.contrast_percent, b.rabi_scan.contrast_percent);
  EXPECT_EQ(a.rabi_trace.signal, b.rabi_trace.signal);
  c.seed = 43;
  EXPECT_NE(simulate(c).observed_series(), a.observed_series());
}

TEST(Simulate, Cadence) {
  auto c = ScenarioConfig::defaults();
  c.duration_days = 1;
  const auto d = simulate(c);
  const auto step = [](const TimeSeries& s) { return s[1].t - s[0].t; };
  EXPECT_EQ(step(d.temperatures.t1), c.t1.sample_interval_s);
  EXPECT_EQ(step(d.temperatures.t2), c.t2.sample_interval_s);
  EXPECT_EQ(step(d.targets.observed.x), c.position_interval_s);
  EXPECT_EQ(step(d.targets.observed.nu_res), c.odmr_interval_s);
  EXPECT_EQ(d.temperatures.t1.start(), c.start_epoch);
  EXPECT_LE(d.temperatures.t2.end(), c.start_epoch + 86400.0);
}

TEST(Simulate, AffineTruthRecoveredByPipeline) {
  auto c = ScenarioConfig::defaults().noiseless();
  for (auto& [name, beta] : c.ground_truth_beta) beta[3] = beta[4] = beta[5] = 0.0;
  const auto data = as_dataset(simulate(c));
  const auto models = train_models(data, split_time(data));
  for (const auto& [name, beta] : c.ground_truth_beta) {
    const auto& got = models.at(name).coefficients;
    for (int k = 0; k < 6; ++k) {
      const double scale = std::max({std::abs(beta[0]), std::abs(beta[1]), std::abs(beta[2])});
      EXPECT_NEAR(got[k], beta[k], 1e-9 * scale) << name << " beta" << k;
    }
  }
}

TEST(Simulate, DefaultRatesNearReferenceLab) {
  const auto c = ScenarioConfig::defaults();
  const auto d = simulate(c);
  const auto gt = ground_truth(c, d);
  EXPECT_NEAR(std::abs(gt.get_double("rate.X_um_per_c")), 1.533, 0.03 * 1.533);
  EXPECT_NEAR(std::abs(gt.get_double("rate.Y_um_per_c")), 0.178, 0.03 * 0.178);
  EXPECT_NEAR(std::abs(gt.get_double("rate.Z_um_per_c")), 0.682, 0.03 * 0.682);
  EXPECT_NEAR(std::abs(gt.get_double("rate.nu_res_khz_per_c")), 517, 0.03 * 517);
  // X drift over the run is about the rate times the T2 range.
  const double t2_range = max_of(d.temperatures.t2) - min_of(d.temperatures.t2);
  const double x_range = max_of(d.targets.clean.x) - min_of(d.targets.clean.x);
  EXPECT_NEAR(x_range, 1.533 * t2_range, 0.03 * 1.533 * t2_range);
  EXPECT_EQ(gt.get_double("resonance_anchor_ghz"), c.constants.resonance_anchor_ghz());
}

TEST(Simulate, DiscontinuityUndoneByCorrection) {
  auto base = ScenarioConfig::defaults();
  base.duration_days = 5;
  auto broken = base;
  broken.discontinuity = DiscontinuityParams{};
  const auto clean_run = simulate(base);
  const auto broken_run = simulate(broken);
  const double t_break = base.start_epoch + 3 * 86400.0;
  const auto& d = *broken.discontinuity;

  const auto fixed_y = correct_discontinuity(broken_run.targets.observed.y, t_break, d.offset_y);
  const auto fixed_z = correct_discontinuity(broken_run.targets.observed.z, t_break, d.offset_z);
  for (const auto& [fixed, ref] : {std::pair{&fixed_y, &clean_run.targets.observed.y},
                                   std::pair{&fixed_z, &clean_run.targets.observed.z}}) {
    std::size_t j = 0;
    for (const auto& s : fixed->samples()) {
      while ((*ref)[j].t < s.t) ++j;
      ASSERT_EQ((*ref)[j].t, s.t);
      // Shift and unshift round once each.
      ASSERT_NEAR(s.value, (*ref)[j].value, 1e-14 * std::max(1.0, std::abs(s.value)));
    }
  }
  // Uncorrected post-break Y sits 0.227 um high; the -0.227 correction lowers it back.
  const double before = interpolate_at(broken_run.targets.observed.y, t_break + 3600) -
                        interpolate_at(clean_run.targets.observed.y, t_break + 3600);
  EXPECT_NEAR(before, 0.227, 1e-12);
}

TEST(Simulate, DiscontinuityGapRemovesSamplesEverywhere) {
  auto c = ScenarioConfig::defaults();
  c.duration_days = 4;
  c.discontinuity = DiscontinuityParams{};
  const auto d = simulate(c);
  const double t_break = c.start_epoch + 3 * 86400.0;
  for (const auto& s : d.observed_series()) {
    for (const auto& x : s.samples()) {
      ASSERT_FALSE(x.t > t_break && x.t <= t_break + c.discontinuity->gap_s) << s.name() << ' ' << x.t;
    }
  }
}

TEST(RabiScan, NoiselessFwhmRecovered) {
  const auto c = ScenarioConfig::defaults().noiseless();
  const auto scan = simulate_rabi_scan(c, 1);
  EXPECT_EQ(scan.frequency_ghz.size(), 17u);
  EXPECT_EQ(scan.frequency_ghz.front(), 1.456);
  EXPECT_EQ(scan.frequency_ghz.back(), 1.460);
  const auto fit = fit_lorentzian(scan.frequency_ghz, scan.contrast_percent);
  EXPECT_NEAR(fit.fwhm_mhz, 1.55, 1e-6 * 1.55);
  EXPECT_NEAR(fit.center_ghz, 1.458, 1e-6 * 1.458);
}

TEST(RabiScan, ZeroPeakIsFlatBaseline) {
  auto c = ScenarioConfig::defaults().noiseless();
  c.rabi.peak_contrast = 0.0;
  const auto scan = simulate_rabi_scan(c, 1);
  for (double v : scan.contrast_percent) EXPECT_EQ(v, c.rabi.baseline);
}

TEST(RabiScan, OnePercentNoiseGolden) {
  const auto c = ScenarioConfig::defaults();
  const auto fit = fit_lorentzian(simulate_rabi_scan(c, c.seed).frequency_ghz,
                                  simulate_rabi_scan(c, c.seed).contrast_percent);
  EXPECT_NEAR(fit.fwhm_mhz, 1.55, 0.05 * 1.55);
  EXPECT_NEAR(fit.fwhm_mhz, 1.5430908572236159, 1e-9);
}

TEST(RabiTrace, ContrastMatchesScanPeak) {
  const auto c = ScenarioConfig::defaults().noiseless();
  const auto trace = simulate_rabi_trace(c, 1);
  const auto fit = fit_sine(trace.time_s, trace.signal);
  EXPECT_NEAR(rabi_contrast(fit), c.rabi.peak_contrast + c.rabi.baseline, 1e-6);
  EXPECT_NEAR(fit.frequency, trace.rabi_frequency_hz, 1e-3);
}

TEST(ScenarioConfig, KeyValueRoundTrip) {
  auto c = ScenarioConfig::defaults().with_model_mismatch();
  c.discontinuity = DiscontinuityParams{};
  c.seed = 1234567;
  c.t2.trend_per_day = 0.123456789012345;
  const auto text = c.to_keyvalue().serialize();
  const auto back = ScenarioConfig::from_keyvalue(KeyValueFile::parse(text, "cfg"));
  EXPECT_EQ(back.to_keyvalue().serialize(), text);
  EXPECT_EQ(back.seed, 1234567u);
  EXPECT_TRUE(back.discontinuity.has_value());
  EXPECT_EQ(back.ground_truth_beta, c.ground_truth_beta);
}

TEST(ScenarioConfig, PartialFileKeepsDefaults) {
  const auto c = ScenarioConfig::from_keyvalue(KeyValueFile::parse("seed = 5\nduration_days = 3\n", "cfg"));
  EXPECT_EQ(c.seed, 5u);
  EXPECT_EQ(c.duration_days, 3.0);
  EXPECT_EQ(c.ground_truth_beta, ScenarioConfig::defaults().ground_truth_beta);
}

TEST(ScenarioConfig, ValidateRejectsNonPositive) {
  auto c = ScenarioConfig::defaults();
  c.position_interval_s = 0;
  EXPECT_NVDRIFT_ERROR(c.validate(), ErrorCode::InvalidArgument);
  c = ScenarioConfig::defaults();
  c.t1.least_count = -0.01;
  EXPECT_NVDRIFT_ERROR(c.validate(), ErrorCode::InvalidArgument);
  c = ScenarioConfig::defaults();
  c.duration_days = 0;
  EXPECT_NVDRIFT_ERROR(c.validate(), ErrorCode::InvalidArgument);
}
