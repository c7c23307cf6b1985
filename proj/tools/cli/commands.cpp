#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>

#include "cli/manifest.hpp"
#include "cli/output_set.hpp"
#include "nvdrift/correlation.hpp"
#include "nvdrift/csv_io.hpp"
#include "nvdrift/curvefit.hpp"
#include "nvdrift/drift_analysis.hpp"
#include "nvdrift/error.hpp"
#include "nvdrift/keyvalue.hpp"
#include "nvdrift/pipeline.hpp"
#include "nvdrift/simulator.hpp"
#include "nvdrift/text_format.hpp"

namespace nvdrift::cli {

namespace {

namespace fs = std::filesystem;

enum class FailureKind { Usage, Input, Pipeline };

struct Failure {
  FailureKind kind;
  std::string code;
  std::string message;
};

[[noreturn]] void usage_error(const std::string& message) {
  throw Failure{FailureKind::Usage, "UsageError", message};
}

// Errors raised while reading inputs are input errors, whatever their code.
template <class F>
auto load_input(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Failure{FailureKind::Input, std::string(to_string(e.code())), e.what()};
  }
}

struct Options {
  std::vector<std::string> inputs;
  std::string out;
  std::string config;
  std::string models;
  std::optional<std::uint64_t> seed;
  double split_days = kDefaultSplitDays;
  std::string train_until;
  std::string window = "1.0,0.7,3.0";
  std::optional<double> gap_split_seconds;
  std::optional<double> fwhm_mhz;
  std::string rabi_fit;
  std::vector<std::string> corrections;
  std::string vars;
  std::string targets;
  bool noiseless = false;
  bool model_mismatch = false;
  bool discontinuity = false;
  bool image = false;
};

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

TrackingWindow parse_window(const std::string& text) {
  const auto parts = split_list(text);
  if (parts.size() != 3) usage_error("--window expects three sizes 'x,y,z' in micrometers");
  std::array<double, 3> v{};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto d = parse_double(parts[i]);
    if (!d || !(*d > 0.0) || !std::isfinite(*d)) usage_error("--window size '" + parts[i] + "' must be a positive number");
    v[i] = *d;
  }
  return {v[0], v[1], v[2]};
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ',';
    out += s;
  }
  return out;
}

Dataset load_inputs(const Options& o, RunManifest& manifest) {
  if (o.inputs.empty()) usage_error("--in is required");
  return load_input([&] {
    Dataset data;
    for (const auto& in : o.inputs) {
      if (!fs::exists(in)) throw Error(ErrorCode::IoError, "input '" + in + "' does not exist");
      const Dataset loaded = load_dataset(in);
      for (const auto& s : loaded.series()) data.put(s);
      manifest.add_input(in);
    }
    return data;
  });
}

std::map<std::string, QuadraticModel> load_models(const std::string& path, RunManifest& manifest) {
  if (path.empty()) usage_error("--models is required");
  return load_input([&] {
    std::map<std::string, QuadraticModel> models;
    std::vector<fs::path> files;
    if (fs::is_directory(path)) {
      for (const auto& entry : fs::directory_iterator(path)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.rfind("model_", 0) == 0 && entry.path().extension() == ".txt") {
          files.push_back(entry.path());
        }
      }
      std::sort(files.begin(), files.end());
    } else if (fs::exists(path)) {
      files.emplace_back(path);
    }
    if (files.empty()) throw Error(ErrorCode::IoError, "no model files found at '" + path + "'");
    for (const auto& f : files) {
      auto model = load_model(f);
      manifest.add_input(f);
      models.emplace(model.target, std::move(model));
    }
    return models;
  });
}

double resolve_split(const Options& o, const Dataset& data) {
  if (!o.train_until.empty()) {
    const auto t = parse_timestamp(o.train_until);
    if (!t) usage_error("--train-until '" + o.train_until + "' is not a timestamp");
    return *t;
  }
  if (!(o.split_days > 0.0)) usage_error("--split-days must be positive");
  return split_time(data, o.split_days);
}

void finish(OutputSet& outputs, RunManifest& manifest, const std::string& command) {
  for (const auto& e : outputs.entries()) manifest.add_output(e.name, e.content);
  outputs.add(command + ".manifest.json", manifest.to_json());
  outputs.commit();
}

void record_common(const Options& o, RunManifest& m) {
  if (o.gap_split_seconds) m.add_parameter("gap_split_seconds", format_double(*o.gap_split_seconds));
}

// ---------------------------------------------------------------- commands

void cmd_simulate(const Options& o, std::ostream& out) {
  RunManifest manifest("simulate");
  ScenarioConfig config = ScenarioConfig::defaults();
  if (!o.config.empty()) {
    config = load_input([&] {
      manifest.add_input(o.config);
      return ScenarioConfig::from_keyvalue(KeyValueFile::parse(read_text_file(o.config), o.config));
    });
  }
  if (o.seed) config.seed = *o.seed;
  if (o.noiseless) config = config.noiseless();
  if (o.model_mismatch) config = config.with_model_mismatch();
  if (o.discontinuity && !config.discontinuity) config.discontinuity = DiscontinuityParams{};
  config.validate();

  manifest.add_parameter("seed", std::to_string(config.seed));
  manifest.add_parameter("noiseless", o.noiseless ? "true" : "false");
  manifest.add_parameter("model_mismatch", o.model_mismatch ? "true" : "false");
  manifest.add_parameter("discontinuity", config.discontinuity ? "true" : "false");

  const auto data = simulate(config);
  OutputSet outputs(o.out);
  for (const auto& s : data.observed_series()) outputs.add(s.name() + ".csv", to_narrow_csv(s));
  outputs.add("rabi_scan.csv", to_table_csv({{"frequency_ghz", "contrast_percent"},
                                             {data.rabi_scan.frequency_ghz, data.rabi_scan.contrast_percent}}));
  outputs.add("rabi_trace.csv", to_table_csv({{"time_s", "signal"}, {data.rabi_trace.time_s, data.rabi_trace.signal}}));
  outputs.add("ground_truth.txt", ground_truth(config, data).serialize());
  outputs.add("scenario.txt", config.to_keyvalue().serialize());
  finish(outputs, manifest, "simulate");
  out << "simulated " << config.duration_days << " days (seed " << config.seed << ") into " << o.out << '\n';
}

void cmd_ingest(const Options& o, std::ostream& out) {
  RunManifest manifest("ingest");
  Dataset data = load_inputs(o, manifest);
  for (const auto& spec : o.corrections) {
    // VAR:T_BREAK:OFFSET; T_BREAK may be an ISO timestamp containing ':'.
    const auto first = spec.find(':');
    const auto last = spec.rfind(':');
    if (first == std::string::npos || first == last) {
      usage_error("--correct expects VAR:T_BREAK:OFFSET, got '" + spec + "'");
    }
    const std::string name = spec.substr(0, first);
    const auto t_break = parse_timestamp(spec.substr(first + 1, last - first - 1));
    const auto offset = parse_double(spec.substr(last + 1));
    if (!t_break || !offset) usage_error("--correct expects VAR:T_BREAK:OFFSET, got '" + spec + "'");
    data.put(correct_discontinuity(data.get(name), *t_break, *offset));
    manifest.add_parameter("correct." + name, format_double(*t_break) + ":" + format_double(*offset));
  }
  OutputSet outputs(o.out);
  outputs.add("dataset.csv", to_wide_csv(data.series()));
  finish(outputs, manifest, "ingest");
  out << "ingested " << data.series().size() << " series into " << (fs::path(o.out) / "dataset.csv").string() << '\n';
}

void cmd_correlate(const Options& o, std::ostream& out) {
  RunManifest manifest("correlate");
  const Dataset data = load_inputs(o, manifest);
  std::vector<std::string> vars = o.vars.empty() ? std::vector<std::string>{} : split_list(o.vars);
  if (vars.empty()) {
    for (const auto v : {var::kT1, var::kT2, var::kX, var::kY, var::kZ}) {
      if (data.contains(v)) vars.emplace_back(v);
    }
  }
  if (vars.size() < 2) usage_error("correlate needs at least two variables");
  std::vector<TimeSeries> series;
  for (const auto& v : vars) series.push_back(data.get(v));

  AlignOptions align_options;
  align_options.max_gap = o.gap_split_seconds;
  const auto frame = align(series, align_options);
  const auto matrix = correlation_matrix(frame, vars);

  manifest.add_parameter("vars", join(vars));
  record_common(o, manifest);
  OutputSet outputs(o.out);
  outputs.add("correlation.csv", to_matrix_csv(matrix));
  KeyValueFile summary;
  summary.set("rows", static_cast<std::int64_t>(frame.rows()));
  summary.set("max_asymmetry", matrix.max_asymmetry());
  outputs.add("correlation_summary.txt", summary.serialize());
  if (o.image) outputs.add("correlation.ppm", render_heatmap_ppm(matrix));
  finish(outputs, manifest, "correlate");
  out << to_matrix_csv(matrix);
}

void cmd_train(const Options& o, std::ostream& out) {
  RunManifest manifest("train");
  const Dataset data = load_inputs(o, manifest);
  const double t_split = resolve_split(o, data);
  std::vector<std::string> targets = o.targets.empty() ? available_targets(data) : split_list(o.targets);
  if (targets.empty()) usage_error("no targets to train (need X, Y, Z or nu_res)");

  OutputSet outputs(o.out);
  for (const auto& target : targets) {
    const auto model = train_target(data, target, t_split, o.gap_split_seconds);
    outputs.add("model_" + target + ".txt", serialize_model(model));
    out << target << ": n_train " << model.n_train << ", rms " << format_double(model.rms_train)
        << (model.rank_deficient ? ", rank deficient" : "") << '\n';
  }
  manifest.add_parameter("train_until", format_double(t_split));
  manifest.add_parameter("targets", join(targets));
  record_common(o, manifest);
  finish(outputs, manifest, "train");
}

void cmd_predict(const Options& o, std::ostream& out) {
  RunManifest manifest("predict");
  const Dataset data = load_inputs(o, manifest);
  const auto models = load_models(o.models, manifest);
  const std::array<TimeSeries, 2> temps{data.get(var::kT1), data.get(var::kT2)};
  AlignOptions align_options;
  align_options.max_gap = o.gap_split_seconds;
  const auto frame = align(temps, align_options);

  NumericTable table;
  table.header = {"timestamp", "T1", "T2"};
  const auto ts = frame.timestamps();
  const auto t1 = frame.column(var::kT1);
  const auto t2 = frame.column(var::kT2);
  table.columns.emplace_back(ts.begin(), ts.end());
  table.columns.emplace_back(t1.begin(), t1.end());
  table.columns.emplace_back(t2.begin(), t2.end());
  for (const auto& [name, model] : models) {
    table.header.push_back(name + "_predicted");
    std::vector<double> col(frame.rows());
    for (std::size_t r = 0; r < frame.rows(); ++r) col[r] = predict(model, t1[r], t2[r]);
    table.columns.push_back(std::move(col));
  }
  record_common(o, manifest);
  OutputSet outputs(o.out);
  outputs.add("predictions.csv", to_table_csv(table));
  finish(outputs, manifest, "predict");
  out << "predicted " << models.size() << " target(s) on " << frame.rows() << " rows\n";
}

double resolve_fwhm(const Options& o, RunManifest& manifest) {
  if (o.fwhm_mhz) {
    if (!(*o.fwhm_mhz > 0.0)) usage_error("--fwhm must be positive");
    return *o.fwhm_mhz;
  }
  if (!o.rabi_fit.empty()) {
    return load_input([&] {
      manifest.add_input(o.rabi_fit);
      return KeyValueFile::parse(read_text_file(o.rabi_fit), o.rabi_fit).get_double("fwhm_mhz");
    });
  }
  return kDefaultFwhmMhz;
}

void emit_report(const DriftReport& report, OutputSet& outputs, std::ostream& out) {
  outputs.add("report.txt", report_text(report));
  outputs.add("report.csv", report_csv(report));
  out << report_text(report);
}

void cmd_evaluate(const Options& o, std::ostream& out) {
  RunManifest manifest("evaluate");
  const TrackingWindow window = parse_window(o.window);
  const Dataset data = load_inputs(o, manifest);
  const auto models = load_models(o.models, manifest);
  const double fwhm = resolve_fwhm(o, manifest);

  double t_from = 0.0;
  if (!o.train_until.empty() || o.split_days != kDefaultSplitDays) {
    t_from = resolve_split(o, data);
  } else {
    t_from = -std::numeric_limits<double>::infinity();
    for (const auto& [name, m] : models) t_from = std::max(t_from, m.train_t1);
  }
  const double held_out_start = std::nextafter(t_from, std::numeric_limits<double>::infinity());
  const double t_to = std::numeric_limits<double>::infinity();

  OutputSet outputs(o.out);
  for (const auto& [name, model] : models) {
    const auto frame = evaluation_frame(data, {model.target}, held_out_start, t_to, o.gap_split_seconds);
    if (frame.rows() == 0) throw Error(ErrorCode::EmptyResult, "no held-out rows for '" + name + "'");
    const auto resid = residual_series(model, frame);
    outputs.add("residuals_" + name + ".csv", to_narrow_csv(resid.absolute));
  }
  const auto report = evaluate_dataset(data, models, window, held_out_start, t_to, fwhm, o.gap_split_seconds);

  manifest.add_parameter("held_out_after", format_double(t_from));
  manifest.add_parameter("window", format_double(window.size_x) + "," + format_double(window.size_y) + "," +
                                       format_double(window.size_z));
  manifest.add_parameter("fwhm_mhz", format_double(fwhm));
  record_common(o, manifest);
  emit_report(report, outputs, out);
  finish(outputs, manifest, "evaluate");
}

void cmd_report(const Options& o, std::ostream& out) {
  RunManifest manifest("report");
  const TrackingWindow window = parse_window(o.window);
  const Dataset data = load_inputs(o, manifest);
  const double fwhm = resolve_fwhm(o, manifest);
  const double lo = -std::numeric_limits<double>::infinity();
  const double hi = std::numeric_limits<double>::infinity();

  DriftReport report;
  if (!o.models.empty()) {
    report = evaluate_dataset(data, load_models(o.models, manifest), window, lo, hi, fwhm, o.gap_split_seconds);
  } else {
    const auto targets = available_targets(data);
    if (targets.empty()) usage_error("report needs at least one of X, Y, Z, nu_res");
    for (const auto& target : targets) {
      const auto frame = evaluation_frame(data, {target}, lo, hi, o.gap_split_seconds);
      const auto part = evaluate_tracking({}, frame, window, fwhm);
      report.rates.insert(part.rates.begin(), part.rates.end());
      report.fitted_slope_rates.insert(part.fitted_slope_rates.begin(), part.fitted_slope_rates.end());
      report.exit_thresholds.insert(part.exit_thresholds.begin(), part.exit_thresholds.end());
      if (part.half_contrast_threshold) report.half_contrast_threshold = part.half_contrast_threshold;
      report.rows = std::max(report.rows, part.rows);
    }
    report.fwhm_mhz = fwhm;
  }
  manifest.add_parameter("window", format_double(window.size_x) + "," + format_double(window.size_y) + "," +
                                       format_double(window.size_z));
  manifest.add_parameter("fwhm_mhz", format_double(fwhm));
  record_common(o, manifest);
  OutputSet outputs(o.out);
  emit_report(report, outputs, out);
  finish(outputs, manifest, "report");
}

void cmd_rabi_fit(const Options& o, std::ostream& out) {
  RunManifest manifest("rabi-fit");
  if (o.inputs.size() != 1) usage_error("rabi-fit takes exactly one --in file");
  const auto table = load_input([&] {
    manifest.add_input(o.inputs.front());
    return read_numeric_file(o.inputs.front());
  });
  const auto has = [&](std::string_view c) {
    return std::find(table.header.begin(), table.header.end(), c) != table.header.end();
  };

  KeyValueFile kv;
  if (has("frequency_ghz") && has("contrast_percent")) {
    const auto fit = fit_lorentzian(table.column("frequency_ghz"), table.column("contrast_percent"));
    kv.set("kind", std::string("lorentzian"));
    kv.set("center_ghz", fit.center_ghz);
    kv.set("fwhm_mhz", fit.fwhm_mhz);
    kv.set("peak_height", fit.peak_height);
    kv.set("baseline", fit.baseline);
    kv.set("rms_residual", fit.rms_residual);
    kv.set("iterations", std::int64_t{fit.iterations});
  } else if (has("time_s") && has("signal")) {
    const auto fit = fit_sine(table.column("time_s"), table.column("signal"));
    kv.set("kind", std::string("sine"));
    kv.set("amplitude", fit.amplitude);
    kv.set("frequency_hz", fit.frequency);
    kv.set("phase_rad", fit.phase);
    kv.set("offset", fit.offset);
    kv.set("contrast_percent", rabi_contrast(fit));
    kv.set("rms_residual", fit.rms_residual);
    kv.set("iterations", std::int64_t{fit.iterations});
  } else {
    throw Failure{FailureKind::Input, "ParseError",
                  o.inputs.front() + ": expected columns frequency_ghz,contrast_percent or time_s,signal"};
  }
  OutputSet outputs(o.out);
  outputs.add("rabi_fit.txt", kv.serialize());
  finish(outputs, manifest, "rabi-fit");
  out << kv.serialize();
}

std::string escape(std::string text) {
  std::string out;
  for (char c : text) {
    if (c == '\n' || c == '\r') {
      out += ' ';
    } else if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else {
      out += c;
    }
  }
  return out;
}

const char* kind_name(FailureKind k) {
  switch (k) {
    case FailureKind::Usage: return "UsageError";
    case FailureKind::Input: return "InputError";
    case FailureKind::Pipeline: return "PipelineError";
  }
  return "PipelineError";
}

int exit_code(FailureKind k) {
  switch (k) {
    case FailureKind::Usage: return kExitUsage;
    case FailureKind::Input: return kExitInput;
    case FailureKind::Pipeline: return kExitPipeline;
  }
  return kExitPipeline;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"nvdrift: predictive NV-center drift tracking from temperature sensors", "nvdrift"};
  app.require_subcommand(1);
  Options o;

  auto add_in = [&](CLI::App* c, bool multiple) {
    if (multiple) {
      c->add_option("--in", o.inputs, "Input CSV file or directory (repeatable)")->required();
    } else {
      c->add_option("--in", o.inputs, "Input CSV file")->required()->expected(1);
    }
  };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "Output directory")->required(); };
  auto add_gap = [&](CLI::App* c) {
    c->add_option("--gap-split-seconds", o.gap_split_seconds,
                  "Do not interpolate across sampling gaps longer than this");
  };
  auto add_split = [&](CLI::App* c) {
    c->add_option("--split-days", o.split_days, "Training span from the first sample, days")->capture_default_str();
    c->add_option("--train-until", o.train_until, "Training cut-off timestamp (epoch seconds or ISO-8601)");
  };
  auto add_window = [&](CLI::App* c) {
    c->add_option("--window", o.window, "Tracking window x,y,z in micrometers")->capture_default_str();
  };
  auto add_fwhm = [&](CLI::App* c) {
    c->add_option("--fwhm", o.fwhm_mhz, "Detuning-contrast FWHM in MHz (default 1.55)");
    c->add_option("--rabi-fit", o.rabi_fit, "Take the FWHM from a rabi-fit output file");
  };

  std::map<std::string, std::function<void()>> handlers;

  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic dataset with known ground truth");
  simulate->add_option("--config", o.config, "Scenario key-value file");
  simulate->add_option("--seed", o.seed, "Random seed (overrides the config)");
  simulate->add_flag("--noiseless", o.noiseless, "Disable all Gaussian noise");
  simulate->add_flag("--model-mismatch", o.model_mismatch, "Add a cubic T2 term outside the fitted model");
  simulate->add_flag("--discontinuity", o.discontinuity, "Inject the Y/Z step and ten-minute gap on day three");
  add_out(simulate);
  handlers["simulate"] = [&] { cmd_simulate(o, out); };

  auto* ingest = app.add_subcommand("ingest", "Validate CSV inputs, apply corrections, emit one wide CSV");
  add_in(ingest, true);
  add_out(ingest);
  ingest->add_option("--correct", o.corrections, "Shift VAR after T_BREAK by OFFSET: VAR:T_BREAK:OFFSET (repeatable)");
  handlers["ingest"] = [&] { cmd_ingest(o, out); };

  auto* correlate = app.add_subcommand("correlate", "Slope-based correlation matrix");
  add_in(correlate, true);
  add_out(correlate);
  add_gap(correlate);
  correlate->add_option("--vars", o.vars, "Comma-separated variables (default T1,T2,X,Y,Z)");
  correlate->add_flag("--image", o.image, "Also write correlation.ppm");
  handlers["correlate"] = [&] { cmd_correlate(o, out); };

  auto* train = app.add_subcommand("train", "Fit one quadratic temperature model per target");
  add_in(train, true);
  add_out(train);
  add_split(train);
  add_gap(train);
  train->add_option("--targets", o.targets, "Comma-separated targets (default: all present)");
  handlers["train"] = [&] { cmd_train(o, out); };

  auto* predict_cmd = app.add_subcommand("predict", "Predict targets from temperatures");
  add_in(predict_cmd, true);
  add_out(predict_cmd);
  add_gap(predict_cmd);
  predict_cmd->add_option("--models", o.models, "Model file or directory of model_*.txt")->required();
  handlers["predict"] = [&] { cmd_predict(o, out); };

  auto* evaluate = app.add_subcommand("evaluate", "Score models on held-out data and write a drift report");
  add_in(evaluate, true);
  add_out(evaluate);
  add_split(evaluate);
  add_gap(evaluate);
  add_window(evaluate);
  add_fwhm(evaluate);
  evaluate->add_option("--models", o.models, "Model file or directory of model_*.txt")->required();
  handlers["evaluate"] = [&] { cmd_evaluate(o, out); };

  auto* rabi = app.add_subcommand("rabi-fit", "Fit a Rabi trace (sine) or a detuning scan (Lorentzian)");
  add_in(rabi, false);
  add_out(rabi);
  handlers["rabi-fit"] = [&] { cmd_rabi_fit(o, out); };

  auto* report = app.add_subcommand("report", "Drift rates and thresholds over the whole dataset");
  add_in(report, true);
  add_out(report);
  add_window(report);
  add_fwhm(report);
  add_gap(report);
  report->add_option("--models", o.models, "Optional models to score on the whole dataset");
  handlers["report"] = [&] { cmd_report(o, out); };

  try {
    try {
      std::vector<std::string> reversed(args.rbegin(), args.rend());
      app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      usage_error(e.what());
    }
    for (auto* sub : app.get_subcommands()) {
      if (sub->count("--help") > 0) {
        out << sub->help();
        return kExitOk;
      }
      handlers.at(sub->get_name())();
    }
    return kExitOk;
  } catch (const Failure& f) {
    err << "error kind=" << kind_name(f.kind) << " code=" << f.code << " message=\"" << escape(f.message)
        << "\"\n";
    return exit_code(f.kind);
  } catch (const Error& e) {
    const FailureKind kind = e.code() == ErrorCode::IoError ? FailureKind::Input : FailureKind::Pipeline;
    err << "error kind=" << kind_name(kind) << " code=" << to_string(e.code()) << " message=\""
        << escape(e.what()) << "\"\n";
    return exit_code(kind);
  } catch (const std::exception& e) {
    err << "error kind=PipelineError code=Internal message=\"" << escape(e.what()) << "\"\n";
    return kExitPipeline;
  }
}

}  // namespace nvdrift::cli
