#include "nvdrift/regression.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "nvdrift/csv_io.hpp"
#include "nvdrift/error.hpp"
#include "nvdrift/keyvalue.hpp"

namespace nvdrift {

namespace {

// Relative pivot threshold below which a column is treated as dependent.
constexpr double kRankThreshold = 1e-11;

double column_center(std::span<const double> values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) return *lo;  // exact zero column after centering
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

DesignRow design_row(double t1, double t2) noexcept {
  return {1.0, t1, t2, t1 * t1, t1 * t2, t2 * t2};
}

Coefficients uncenter(const Coefficients& c, double c1, double c2) noexcept {
  // Expand c0 + c1'(T1-m1) + c2'(T2-m2) + c3'(T1-m1)^2 + c4'(T1-m1)(T2-m2) + c5'(T2-m2)^2.
  const double m1 = c1;
  const double m2 = c2;
  Coefficients raw{};
  raw[5] = c[5];
  raw[4] = c[4];
  raw[3] = c[3];
  raw[2] = c[2] - c[4] * m1 - 2.0 * c[5] * m2;
  raw[1] = c[1] - 2.0 * c[3] * m1 - c[4] * m2;
  raw[0] = c[0] - c[1] * m1 - c[2] * m2 + c[3] * m1 * m1 + c[4] * m1 * m2 + c[5] * m2 * m2;
  return raw;
}

QuadraticModel fit_quadratic(const AlignedFrame& frame, std::string_view target) {
  const auto t1 = frame.column(var::kT1);
  const auto t2 = frame.column(var::kT2);
  const auto y = frame.column(target);
  const std::size_t n = frame.rows();
  if (n < kQuadraticTerms) {
    throw Error(ErrorCode::InsufficientRows, "fitting '" + std::string(target) + "' needs at least " +
                                                 std::to_string(kQuadraticTerms) + " rows, got " +
                                                 std::to_string(n));
  }

  QuadraticModel model;
  model.target = std::string(target);
  model.center_t1 = column_center(t1);
  model.center_t2 = column_center(t2);
  model.train_t0 = frame.timestamps().front();
  model.train_t1 = frame.timestamps().back();
  model.n_train = n;

  Eigen::MatrixXd design(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(kQuadraticTerms));
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = design_row(t1[r] - model.center_t1, t2[r] - model.center_t2);
    for (std::size_t c = 0; c < kQuadraticTerms; ++c) {
      design(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
    }
    rhs(static_cast<Eigen::Index>(r)) = y[r];
  }

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(kRankThreshold);
  cod.compute(design);
  const Eigen::VectorXd centered = cod.solve(rhs);

  Coefficients c{};
  for (std::size_t i = 0; i < kQuadraticTerms; ++i) c[i] = centered(static_cast<Eigen::Index>(i));
  model.coefficients = uncenter(c, model.center_t1, model.center_t2);
  model.rank = static_cast<int>(cod.rank());
  model.rank_deficient = model.rank < static_cast<int>(kQuadraticTerms);

  for (double b : model.coefficients) {
    if (!std::isfinite(b)) {
      throw Error(ErrorCode::NonFiniteValue, "fit of '" + model.target + "' produced non-finite coefficients");
    }
  }

  const Eigen::VectorXd resid = design * centered - rhs;
  model.rms_train = std::sqrt(resid.squaredNorm() / static_cast<double>(n));
  return model;
}

double predict(const QuadraticModel& model, double t1, double t2) noexcept {
  const auto row = design_row(t1, t2);
  double acc = 0.0;
  for (std::size_t i = 0; i < kQuadraticTerms; ++i) acc += row[i] * model.coefficients[i];
  return acc;
}

ResidualStats summarize(std::span<const double> r) noexcept {
  ResidualStats s;
  s.count = r.size();
  if (r.empty()) return s;
  double sum = 0.0;
  double sq = 0.0;
  for (double v : r) {
    const double a = std::abs(v);
    s.max = std::max(s.max, a);
    sum += a;
    sq += a * a;
  }
  s.mean = sum / static_cast<double>(r.size());
  s.rms = std::sqrt(sq / static_cast<double>(r.size()));
  return s;
}

ResidualSeries residual_series(const QuadraticModel& model, const AlignedFrame& frame) {
  const auto t1 = frame.column(var::kT1);
  const auto t2 = frame.column(var::kT2);
  const auto y = frame.column(model.target);
  if (frame.rows() == 0) {
    throw Error(ErrorCode::EmptyResult, "no rows to evaluate '" + model.target + "' on");
  }
  std::vector<double> abs_resid(frame.rows());
  for (std::size_t r = 0; r < frame.rows(); ++r) {
    abs_resid[r] = std::abs(y[r] - predict(model, t1[r], t2[r]));
  }
  const auto stats = summarize(abs_resid);
  return {TimeSeries(model.target + "_abs_residual", frame.timestamps(), abs_resid), stats};
}

std::string serialize_model(const QuadraticModel& model) {
  KeyValueFile kv;
  kv.set("format_version", std::int64_t{kModelFormatVersion});
  kv.set("target", model.target);
  for (std::size_t i = 0; i < kQuadraticTerms; ++i) {
    kv.set("beta" + std::to_string(i), model.coefficients[i]);
  }
  kv.set("center_t1", model.center_t1);
  kv.set("center_t2", model.center_t2);
  kv.set("train_t0", model.train_t0);
  kv.set("train_t1", model.train_t1);
  kv.set("n_train", static_cast<std::int64_t>(model.n_train));
  kv.set("rms_train", model.rms_train);
  kv.set("rank", std::int64_t{model.rank});
  kv.set("rank_deficient", model.rank_deficient);
  return "# quadratic temperature model: b0 + b1*T1 + b2*T2 + b3*T1^2 + b4*T1*T2 + b5*T2^2\n" +
         kv.serialize();
}

QuadraticModel parse_model(std::string_view text, std::string_view source) {
  const auto kv = KeyValueFile::parse(text, source);
  const auto version = kv.get_int("format_version");
  if (version != kModelFormatVersion) {
    throw Error(ErrorCode::ParseError, std::string(source) + ": unsupported model format_version " +
                                           std::to_string(version));
  }
  QuadraticModel m;
  m.target = std::string(kv.get_string("target"));
  for (std::size_t i = 0; i < kQuadraticTerms; ++i) {
    m.coefficients[i] = kv.get_double("beta" + std::to_string(i));
    if (!std::isfinite(m.coefficients[i])) {
      throw Error(ErrorCode::ParseError, std::string(source) + ": non-finite coefficient beta" +
                                             std::to_string(i));
    }
  }
  m.center_t1 = kv.get_double("center_t1");
  m.center_t2 = kv.get_double("center_t2");
  m.train_t0 = kv.get_double("train_t0");
  m.train_t1 = kv.get_double("train_t1");
  const auto n_train = kv.get_int("n_train");
  if (n_train < static_cast<std::int64_t>(kQuadraticTerms)) {
    throw Error(ErrorCode::ParseError, std::string(source) + ": n_train below " +
                                           std::to_string(kQuadraticTerms));
  }
  m.n_train = static_cast<std::size_t>(n_train);
  m.rms_train = kv.get_double("rms_train");
  m.rank = static_cast<int>(kv.get_int_or("rank", static_cast<std::int64_t>(kQuadraticTerms)));
  m.rank_deficient = kv.get_bool("rank_deficient");
  return m;
}

QuadraticModel load_model(const std::filesystem::path& path) {
  return parse_model(read_text_file(path), path.string());
}

}  // namespace nvdrift
