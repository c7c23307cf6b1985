#include "nvdrift/curvefit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <vector>

#include "nvdrift/error.hpp"
#include "nvdrift/text_format.hpp"

namespace nvdrift {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMaxDamping = 1e16;

struct LmResult {
  Eigen::VectorXd params;
  double cost = 0.0;
  int iterations = 0;
};

// Levenberg-Marquardt with Marquardt diagonal scaling. Converges when an
// accepted step lowers the cost by less than the relative tolerance, when the
// cost reaches zero, or when no damping level yields a decrease (stationary to
// working precision).
template <class ResidualFn, class JacobianFn>
LmResult levenberg_marquardt(ResidualFn&& residuals, JacobianFn&& jacobian, Eigen::VectorXd p,
                             const FitOptions& options, const char* what) {
  Eigen::VectorXd r = residuals(p);
  double cost = r.squaredNorm();
  double damping = options.initial_damping;

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    if (cost == 0.0) return {p, cost, iter - 1};
    const Eigen::MatrixXd J = jacobian(p);
    const Eigen::VectorXd g = J.transpose() * r;
    const Eigen::MatrixXd H = J.transpose() * J;
    Eigen::VectorXd scale = H.diagonal();
    const double floor = std::max(scale.maxCoeff(), 1.0) * 1e-12;
    for (Eigen::Index i = 0; i < scale.size(); ++i) scale(i) = std::max(scale(i), floor);

    while (true) {
      Eigen::MatrixXd A = H;
      A.diagonal() += damping * scale;
      const Eigen::VectorXd step = A.ldlt().solve(-g);
      const Eigen::VectorXd trial = p + step;
      const Eigen::VectorXd r_trial = residuals(trial);
      const double trial_cost = r_trial.squaredNorm();
      if (std::isfinite(trial_cost) && trial_cost < cost) {
        const double rel = (cost - trial_cost) / cost;
        p = trial;
        r = r_trial;
        cost = trial_cost;
        damping = std::max(damping / 10.0, 1e-15);
        if (rel < options.relative_cost_tolerance) return {p, cost, iter};
        break;
      }
      damping *= 10.0;
      if (damping > kMaxDamping) return {p, cost, iter};
    }
  }
  throw Error(ErrorCode::NonConvergence, std::string(what) + " did not converge within " +
                                             std::to_string(options.max_iterations) + " iterations");
}

double wrap_phase(double phase) {
  double w = std::fmod(phase, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

void check_lengths(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::LengthMismatch, std::string(what) + ": " + std::to_string(a.size()) +
                                               " abscissae vs " + std::to_string(b.size()) + " values");
  }
}

// Frequency of the strongest periodogram peak of (y - mean) on a grid
// oversampled eight times relative to 1/span, refined by a parabola through
// the peak and its neighbours.
double dominant_frequency(std::span<const double> t, std::span<const double> centered, double span) {
  constexpr int kOversample = 8;
  const double df = 1.0 / (kOversample * span);
  const auto bins = static_cast<int>(kOversample * static_cast<double>(t.size()) / 2.0);
  std::vector<double> power(static_cast<std::size_t>(bins) + 1, 0.0);
  for (int k = 1; k <= bins; ++k) {
    const double w = kTwoPi * k * df;
    double c = 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      c += centered[i] * std::cos(w * t[i]);
      s += centered[i] * std::sin(w * t[i]);
    }
    power[static_cast<std::size_t>(k)] = c * c + s * s;
  }
  const auto best = static_cast<int>(std::distance(power.begin(), std::max_element(power.begin() + 1, power.end())));
  double shift = 0.0;
  if (best > 1 && best < bins) {
    const double a = power[static_cast<std::size_t>(best - 1)];
    const double b = power[static_cast<std::size_t>(best)];
    const double c = power[static_cast<std::size_t>(best + 1)];
    const double denom = a - 2.0 * b + c;
    if (denom < 0.0) shift = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
  }
  return (best + shift) * df;
}

}  // namespace

double sine_model(const SineFit& fit, double t) noexcept {
  return fit.offset + fit.amplitude * std::sin(kTwoPi * fit.frequency * t + fit.phase);
}

double lorentzian_model(const LorentzianFit& fit, double f_ghz) noexcept {
  const double half = 0.5 * fit.fwhm_mhz;
  const double dx = (f_ghz - fit.center_ghz) * 1e3;  // MHz
  return fit.baseline + fit.peak_height * half * half / (dx * dx + half * half);
}

Eigen::MatrixXd sine_jacobian(const SineFit& fit, std::span<const double> t) {
  Eigen::MatrixXd J(static_cast<Eigen::Index>(t.size()), 4);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double theta = kTwoPi * fit.frequency * t[i] + fit.phase;
    const auto r = static_cast<Eigen::Index>(i);
    J(r, 0) = std::sin(theta);
    J(r, 1) = fit.amplitude * std::cos(theta) * kTwoPi * t[i];
    J(r, 2) = fit.amplitude * std::cos(theta);
    J(r, 3) = 1.0;
  }
  return J;
}

Eigen::MatrixXd lorentzian_jacobian(const LorentzianFit& fit, std::span<const double> f_ghz) {
  Eigen::MatrixXd J(static_cast<Eigen::Index>(f_ghz.size()), 4);
  const double w = 0.5 * fit.fwhm_mhz;
  for (std::size_t i = 0; i < f_ghz.size(); ++i) {
    const double dx = (f_ghz[i] - fit.center_ghz) * 1e3;
    const double d = dx * dx + w * w;
    const auto r = static_cast<Eigen::Index>(i);
    J(r, 0) = fit.peak_height * w * w * 2.0 * dx / (d * d) * 1e3;
    J(r, 1) = fit.peak_height * w * dx * dx / (d * d);
    J(r, 2) = w * w / d;
    J(r, 3) = 1.0;
  }
  return J;
}

SineFit fit_sine(std::span<const double> t, std::span<const double> y, const FitOptions& options) {
  check_lengths(t, y, "fit_sine");
  if (t.size() < 8) throw Error(ErrorCode::TooFewSamples, "fit_sine needs at least 8 samples");

  const auto [tmin_it, tmax_it] = std::minmax_element(t.begin(), t.end());
  const double t0 = *tmin_it;
  const double span = *tmax_it - t0;
  if (!(span > 0.0)) throw Error(ErrorCode::NoOscillation, "fit_sine: all samples share one time");

  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  const auto [ymin_it, ymax_it] = std::minmax_element(y.begin(), y.end());
  const double range = *ymax_it - *ymin_it;
  if (!(range > 1e-12 * std::max(1.0, std::abs(mean)))) {
    throw Error(ErrorCode::NoOscillation, "fit_sine: signal is constant");
  }

  // Work on a time axis starting at zero; the phase is moved back at the end.
  std::vector<double> ts(t.size());
  std::vector<double> centered(y.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    ts[i] = t[i] - t0;
    centered[i] = y[i] - mean;
  }

  const double f0 = dominant_frequency(ts, centered, span);
  if (f0 * span < 0.75) {
    throw Error(ErrorCode::NoOscillation, "fit_sine: spectral peak at " + format_double(f0) +
                                              " Hz is below one period over the trace");
  }

  // Phase from the linear (sin, cos) sub-fit at fixed frequency.
  Eigen::Matrix2d normal = Eigen::Matrix2d::Zero();
  Eigen::Vector2d rhs = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const Eigen::Vector2d basis(std::sin(kTwoPi * f0 * ts[i]), std::cos(kTwoPi * f0 * ts[i]));
    normal += basis * basis.transpose();
    rhs += basis * centered[i];
  }
  const Eigen::Vector2d ab = normal.ldlt().solve(rhs);

  Eigen::VectorXd p(4);
  p << range / 2.0, f0, std::atan2(ab(1), ab(0)), mean;

  const auto n = static_cast<Eigen::Index>(ts.size());
  auto residuals = [&](const Eigen::VectorXd& q) {
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      r(i) = q(3) + q(0) * std::sin(kTwoPi * q(1) * ts[k] + q(2)) - y[k];
    }
    return r;
  };
  auto jacobian = [&](const Eigen::VectorXd& q) {
    SineFit probe{q(0), q(1), q(2), q(3)};
    return sine_jacobian(probe, ts);
  };

  const auto result = levenberg_marquardt(residuals, jacobian, p, options, "fit_sine");

  SineFit fit;
  fit.amplitude = result.params(0);
  fit.frequency = result.params(1);
  double phase = result.params(2);
  if (fit.frequency < 0.0) {
    // sin(-x + p) = sin(x + pi - p)
    fit.frequency = -fit.frequency;
    phase = std::numbers::pi - phase;
  }
  if (fit.amplitude < 0.0) {
    fit.amplitude = -fit.amplitude;
    phase += std::numbers::pi;
  }
  fit.phase = wrap_phase(phase - kTwoPi * fit.frequency * t0);
  fit.offset = result.params(3);
  fit.rms_residual = std::sqrt(result.cost / static_cast<double>(ts.size()));
  fit.iterations = result.iterations;
  return fit;
}

double rabi_contrast(const SineFit& fit) {
  if (!(fit.offset > 0.0)) {
    throw Error(ErrorCode::NonPositiveOffset, "Rabi contrast needs a positive offset, got " +
                                                  format_double(fit.offset));
  }
  return 100.0 * 2.0 * fit.amplitude / fit.offset;
}

LorentzianFit fit_lorentzian(std::span<const double> f_ghz, std::span<const double> contrast,
                             const FitOptions& options) {
  check_lengths(f_ghz, contrast, "fit_lorentzian");
  if (f_ghz.size() < 5) throw Error(ErrorCode::TooFewSamples, "fit_lorentzian needs at least 5 points");

  std::vector<std::size_t> order(f_ghz.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f_ghz[a] < f_ghz[b]; });

  // Internal abscissa: MHz offset from the middle of the scan.
  const double f_lo = f_ghz[order.front()];
  const double f_hi = f_ghz[order.back()];
  const double f_ref = 0.5 * (f_lo + f_hi);
  std::vector<double> x(order.size());
  std::vector<double> y(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    x[i] = (f_ghz[order[i]] - f_ref) * 1e3;
    y[i] = contrast[order[i]];
  }

  const auto peak = static_cast<std::size_t>(std::distance(y.begin(), std::max_element(y.begin(), y.end())));
  if (peak == 0 || peak + 1 == y.size()) {
    throw Error(ErrorCode::PeakAtEdge, "fit_lorentzian: maximum lies on the scan edge");
  }
  const double ymin = *std::min_element(y.begin(), y.end());
  const double height = y[peak] - ymin;
  const double level = ymin + 0.5 * height;

  // Half-height crossings, linearly interpolated.
  std::optional<double> left;
  for (std::size_t i = peak; i-- > 0;) {
    if (y[i] <= level) {
      left = x[i] + (level - y[i]) / (y[i + 1] - y[i]) * (x[i + 1] - x[i]);
      break;
    }
  }
  std::optional<double> right;
  for (std::size_t i = peak + 1; i < y.size(); ++i) {
    if (y[i] <= level) {
      right = x[i - 1] + (y[i - 1] - level) / (y[i - 1] - y[i]) * (x[i] - x[i - 1]);
      break;
    }
  }
  double gamma0 = 0.0;
  if (left && right) {
    gamma0 = *right - *left;
  } else if (left) {
    gamma0 = 2.0 * (x[peak] - *left);
  } else if (right) {
    gamma0 = 2.0 * (*right - x[peak]);
  }
  if (!(gamma0 > 0.0)) gamma0 = 0.25 * (x.back() - x.front());

  Eigen::VectorXd p(4);
  p << x[peak], gamma0, height, ymin;

  const auto n = static_cast<Eigen::Index>(x.size());
  auto residuals = [&](const Eigen::VectorXd& q) {
    Eigen::VectorXd r(n);
    const double w = 0.5 * q(1);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const double dx = x[k] - q(0);
      r(i) = q(3) + q(2) * w * w / (dx * dx + w * w) - y[k];
    }
    return r;
  };
  auto jacobian = [&](const Eigen::VectorXd& q) {
    Eigen::MatrixXd J(n, 4);
    const double w = 0.5 * q(1);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double dx = x[static_cast<std::size_t>(i)] - q(0);
      const double d = dx * dx + w * w;
      J(i, 0) = q(2) * w * w * 2.0 * dx / (d * d);
      J(i, 1) = q(2) * w * dx * dx / (d * d);
      J(i, 2) = w * w / d;
      J(i, 3) = 1.0;
    }
    return J;
  };

  const auto result = levenberg_marquardt(residuals, jacobian, p, options, "fit_lorentzian");

  LorentzianFit fit;
  fit.center_ghz = f_ref + result.params(0) * 1e-3;
  fit.fwhm_mhz = std::abs(result.params(1));
  fit.peak_height = result.params(2);
  fit.baseline = result.params(3);
  fit.rms_residual = std::sqrt(result.cost / static_cast<double>(x.size()));
  fit.iterations = result.iterations;
  if (!(fit.fwhm_mhz > 0.0) || fit.center_ghz < f_lo || fit.center_ghz > f_hi) {
    throw Error(ErrorCode::NonConvergence, "fit_lorentzian: fitted center " +
                                               format_double(fit.center_ghz) +
                                               " GHz left the scanned interval");
  }
  return fit;
}

}  // namespace nvdrift
