#include "nvdrift/drift_analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "nvdrift/correlation.hpp"
#include "nvdrift/error.hpp"
#include "nvdrift/text_format.hpp"

namespace nvdrift {

namespace {

constexpr double kGhzToKhz = 1e6;

double range_of(std::span<const double> v, const char* what) {
  if (v.empty()) throw Error(ErrorCode::DegenerateRange, std::string(what) + " is empty");
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (!(*hi > *lo)) throw Error(ErrorCode::DegenerateRange, std::string(what) + " is constant");
  return *hi - *lo;
}

bool is_frequency(std::string_view target) { return target == var::kNuRes; }

}  // namespace

void TrackingWindow::validate() const {
  if (!(size_x > 0.0 && size_y > 0.0 && size_z > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tracking window sizes must be positive");
  }
}

std::optional<double> TrackingWindow::size_for(std::string_view axis) const noexcept {
  if (axis == var::kX) return size_x;
  if (axis == var::kY) return size_y;
  if (axis == var::kZ) return size_z;
  return std::nullopt;
}

double drift_rate(std::span<const double> target, std::span<const double> reference) {
  const double magnitude = range_of(target, "drift target") / range_of(reference, "drift reference");
  return slope_correlation(target, reference) >= 0.0 ? magnitude : -magnitude;
}

double drift_rate(const TimeSeries& target, const TimeSeries& reference) {
  const auto tv = target.values();
  const auto rv = reference.values();
  const double magnitude = range_of(tv, "drift target") / range_of(rv, "drift reference");
  const std::array<TimeSeries, 2> pair{target.renamed("target"), reference.renamed("reference")};
  const auto frame = align(pair);
  const double corr = slope_correlation(frame.column("target"), frame.column("reference"));
  return corr >= 0.0 ? magnitude : -magnitude;
}

double window_exit_threshold(double rate_um_per_c, double window_size_um) {
  if (!(window_size_um > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "window size must be positive");
  }
  if (rate_um_per_c == 0.0 || !std::isfinite(rate_um_per_c)) {
    throw Error(ErrorCode::ZeroRate, "drift rate is zero; the NV never leaves the window");
  }
  return 0.5 * window_size_um / std::abs(rate_um_per_c);
}

double half_contrast_threshold(double fwhm_mhz, double freq_rate_khz_per_c) {
  if (!(fwhm_mhz > 0.0)) throw Error(ErrorCode::InvalidArgument, "FWHM must be positive");
  if (freq_rate_khz_per_c == 0.0 || !std::isfinite(freq_rate_khz_per_c)) {
    throw Error(ErrorCode::ZeroRate, "resonance drift rate is zero");
  }
  return 0.5 * fwhm_mhz * 1e3 / std::abs(freq_rate_khz_per_c);
}

DriftReport evaluate_tracking(const std::map<std::string, QuadraticModel>& models,
                              const AlignedFrame& frame, const TrackingWindow& window,
                              double fwhm_mhz) {
  window.validate();
  DriftReport report;
  report.fwhm_mhz = fwhm_mhz;
  report.rows = frame.rows();
  const auto t1 = frame.column(var::kT1);
  const auto t2 = frame.column(var::kT2);

  for (const auto& [name, model] : models) {
    const auto actual = frame.column(model.target);
    std::vector<double> abs_resid(frame.rows());
    for (std::size_t r = 0; r < frame.rows(); ++r) {
      abs_resid[r] = std::abs(actual[r] - predict(model, t1[r], t2[r]));
    }
    report.residual_stats[model.target] = summarize(abs_resid);

    if (const auto size = window.size_for(model.target)) {
      const double half = 0.5 * *size;
      const auto inside = std::count_if(abs_resid.begin(), abs_resid.end(),
                                        [&](double r) { return r < half; });
      report.in_window_fraction[model.target] =
          abs_resid.empty() ? 0.0 : static_cast<double>(inside) / static_cast<double>(abs_resid.size());
    }
  }

  // Rates are properties of the data, reported for every target column present.
  for (const auto target : {var::kX, var::kY, var::kZ, var::kNuRes}) {
    if (!frame.has_column(target) || frame.rows() < 2) continue;
    const auto values = frame.column(target);
    double rate = 0.0;
    double slope = 0.0;
    try {
      rate = drift_rate(values, t2);
      slope = linear_fit(t2, values).slope;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DegenerateRange || e.code() == ErrorCode::DegenerateX) continue;
      throw;
    }
    const double unit = is_frequency(target) ? kGhzToKhz : 1.0;
    const std::string key(target);
    report.rates[key] = rate * unit;
    report.fitted_slope_rates[key] = slope * unit;

    if (const auto size = window.size_for(target); size && rate != 0.0) {
      report.exit_thresholds[key] = window_exit_threshold(rate, *size);
    }
    if (is_frequency(target) && rate != 0.0 && fwhm_mhz > 0.0) {
      report.half_contrast_threshold = half_contrast_threshold(fwhm_mhz, rate * unit);
    }
  }
  return report;
}

namespace {

const char* rate_unit(std::string_view target) { return is_frequency(target) ? "kHz/degC" : "um/degC"; }
const char* value_unit(std::string_view target) { return is_frequency(target) ? "GHz" : "um"; }

}  // namespace

std::string report_text(const DriftReport& report) {
  std::ostringstream out;
  out << "Drift report (" << report.rows << " rows)\n\n";
  out << "Drift rates (full range / T2 full range):\n";
  for (const auto& [k, v] : report.rates) {
    out << "  " << k << ": " << format_double(v) << ' ' << rate_unit(k)
        << "  (fitted slope " << format_double(report.fitted_slope_rates.at(k)) << ")\n";
  }
  out << "\nWindow exit thresholds:\n";
  for (const auto& [k, v] : report.exit_thresholds) {
    out << "  " << k << ": " << format_double(v) << " degC\n";
  }
  if (report.half_contrast_threshold) {
    out << "\nHalf-contrast threshold (FWHM " << format_double(report.fwhm_mhz)
        << " MHz): " << format_double(*report.half_contrast_threshold) << " degC\n";
  }
  out << "\nPrediction residuals |actual - predicted|:\n";
  for (const auto& [k, s] : report.residual_stats) {
    out << "  " << k << ": max " << format_double(s.max) << ", mean " << format_double(s.mean)
        << ", rms " << format_double(s.rms) << ' ' << value_unit(k) << '\n';
  }
  if (!report.in_window_fraction.empty()) {
    out << "\nFraction of rows inside the tracking window:\n";
    for (const auto& [k, v] : report.in_window_fraction) {
      out << "  " << k << ": " << format_double(v) << '\n';
    }
  }
  return out.str();
}

std::string report_csv(const DriftReport& report) {
  std::string out = "quantity,axis,value,unit\n";
  auto row = [&](std::string_view q, std::string_view axis, double v, std::string_view unit) {
    out += q;
    out += ',';
    out += axis;
    out += ',';
    out += format_double(v);
    out += ',';
    out += unit;
    out += '\n';
  };
  for (const auto& [k, v] : report.rates) row("drift_rate", k, v, rate_unit(k));
  for (const auto& [k, v] : report.fitted_slope_rates) row("fitted_slope_rate", k, v, rate_unit(k));
  for (const auto& [k, v] : report.exit_thresholds) row("window_exit_threshold", k, v, "degC");
  if (report.half_contrast_threshold) {
    row("half_contrast_threshold", var::kNuRes, *report.half_contrast_threshold, "degC");
  }
  for (const auto& [k, s] : report.residual_stats) {
    row("residual_max", k, s.max, value_unit(k));
    row("residual_mean", k, s.mean, value_unit(k));
    row("residual_rms", k, s.rms, value_unit(k));
  }
  for (const auto& [k, v] : report.in_window_fraction) row("in_window_fraction", k, v, "fraction");
  row("rows", "all", static_cast<double>(report.rows), "count");
  return out;
}

}  // namespace nvdrift
