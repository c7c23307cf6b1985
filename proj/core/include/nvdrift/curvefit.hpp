#pragma once

#include <Eigen/Core>
#include <span>
#include <string>

namespace nvdrift {

/// offset + amplitude * sin(2*pi*frequency*t + phase)
struct SineFit {
  double amplitude = 0.0;  // >= 0, sign folded into phase
  double frequency = 0.0;  // Hz
  double phase = 0.0;      // radians, [0, 2*pi)
  double offset = 0.0;
  double rms_residual = 0.0;
  int iterations = 0;
};

/// baseline + peak_height * (fwhm/2)^2 / ((f - center)^2 + (fwhm/2)^2)
struct LorentzianFit {
  double center_ghz = 0.0;
  double fwhm_mhz = 0.0;     // > 0
  double peak_height = 0.0;  // percent contrast
  double baseline = 0.0;
  double rms_residual = 0.0;
  int iterations = 0;
};

/// Damped Gauss-Newton settings shared by both fits. Damping is multiplied by
/// 10 after a rejected step and divided by 10 after an accepted one.
struct FitOptions {
  int max_iterations = 200;
  double relative_cost_tolerance = 1e-10;
  double initial_damping = 1e-3;
};

double sine_model(const SineFit& fit, double t) noexcept;
double lorentzian_model(const LorentzianFit& fit, double f_ghz) noexcept;

/// Model derivatives per sample. Sine columns: amplitude, frequency, phase,
/// offset. Lorentzian columns: center_ghz, fwhm_mhz, peak_height, baseline.
Eigen::MatrixXd sine_jacobian(const SineFit& fit, std::span<const double> t);
Eigen::MatrixXd lorentzian_jacobian(const LorentzianFit& fit, std::span<const double> f_ghz);

/// Fits a sine to an oscillation trace. Needs >= 8 samples covering at least
/// one period. The starting frequency comes from the strongest peak of a
/// direct Fourier periodogram of the mean-removed signal.
/// Throws TooFewSamples, LengthMismatch, NoOscillation or NonConvergence.
SineFit fit_sine(std::span<const double> t, std::span<const double> y, const FitOptions& options = {});

/// 2 * amplitude / offset, in percent. Throws NonPositiveOffset.
double rabi_contrast(const SineFit& fit);

/// Fits a Lorentzian to contrast-vs-frequency points (>= 5, maximum not on an
/// edge). Throws TooFewSamples, LengthMismatch, PeakAtEdge or NonConvergence.
LorentzianFit fit_lorentzian(std::span<const double> f_ghz, std::span<const double> contrast,
                             const FitOptions& options = {});

}  // namespace nvdrift
