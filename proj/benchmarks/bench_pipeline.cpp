#include <benchmark/benchmark.h>

#include "nvdrift/correlation.hpp"
#include "nvdrift/curvefit.hpp"
#include "nvdrift/pipeline.hpp"
#include "nvdrift/regression.hpp"
#include "nvdrift/simulator.hpp"

using namespace nvdrift;

namespace {

const SimulatedDataset& scenario() {
  static const SimulatedDataset data = simulate(ScenarioConfig::defaults());
  return data;
}

Dataset dataset() {
  Dataset d;
  for (const auto& s : scenario().observed_series()) d.put(s);
  return d;
}

}  // namespace

static void BM_Simulate(benchmark::State& state) {
  auto config = ScenarioConfig::defaults();
  config.duration_days = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate(config));
}
BENCHMARK(BM_Simulate)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_AlignUnionGrid(benchmark::State& state) {
  const auto& d = scenario();
  const std::vector<TimeSeries> s{d.temperatures.t1, d.temperatures.t2, d.targets.observed.x,
                                  d.targets.observed.y, d.targets.observed.z};
  for (auto _ : state) benchmark::DoNotOptimize(align(s));
}
BENCHMARK(BM_AlignUnionGrid)->Unit(benchmark::kMillisecond);

static void BM_FitQuadratic(benchmark::State& state) {
  const auto data = dataset();
  const std::vector<TimeSeries> s{data.get("T1"), data.get("T2"), data.get("X")};
  AlignOptions options;
  options.reference = "X";
  const auto frame = align(s, options);
  for (auto _ : state) benchmark::DoNotOptimize(fit_quadratic(frame, "X"));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(frame.rows()));
}
BENCHMARK(BM_FitQuadratic);

static void BM_TrainAllTargets(benchmark::State& state) {
  const auto data = dataset();
  const double t_split = split_time(data);
  for (auto _ : state) benchmark::DoNotOptimize(train_models(data, t_split));
}
BENCHMARK(BM_TrainAllTargets)->Unit(benchmark::kMillisecond);

static void BM_CorrelationMatrix(benchmark::State& state) {
  const auto& d = scenario();
  const std::vector<TimeSeries> s{d.temperatures.t1, d.temperatures.t2, d.targets.observed.x,
                                  d.targets.observed.y, d.targets.observed.z};
  const auto frame = align(s);
  for (auto _ : state) benchmark::DoNotOptimize(correlation_matrix(frame));
}
BENCHMARK(BM_CorrelationMatrix)->Unit(benchmark::kMillisecond);

static void BM_FitLorentzian(benchmark::State& state) {
  const auto& scan = scenario().rabi_scan;
  for (auto _ : state) benchmark::DoNotOptimize(fit_lorentzian(scan.frequency_ghz, scan.contrast_percent));
}
BENCHMARK(BM_FitLorentzian);

static void BM_FitSine(benchmark::State& state) {
  const auto& trace = scenario().rabi_trace;
  for (auto _ : state) benchmark::DoNotOptimize(fit_sine(trace.time_s, trace.signal));
}
BENCHMARK(BM_FitSine);
BENCHMARK_MAIN();
