#pragma once

#include <limits>
#include <span>
#include <vector>

#include "fadline/core.hpp"

namespace fadline {

// Approximate spectrum of a sinusoid passed through a length-modulated
// quadratic interpolator: the magnitude swings down to a_min at twice the
// modulating rate (AM) while the excess phase delay swings by +-tau_max at
// the modulating rate (PM). Only sidebands up to order two are kept.

// Bessel function of the first kind, orders 0..3, 0 <= x <= 20.
double bessel_j (int order, double x);

struct ModulationParams {
  double a_min;   // minimum linear gain, (0, 1]
  double tau_max; // maximum excess phase delay, samples
  double omega0;  // carrier, rad/sample
  double omega_m; // modulating frequency, rad/s
};

// A1 is stored as a magnitude; in the expansion it appears with a negative
// sign on the lower sideband. SNR only depends on powers.
struct SidebandModel {
  double m;   // AM index
  double a_m; // mean gain
  double a0;  // carrier
  double a1;  // first-order sidebands
  double a2;  // second-order sidebands
};

SidebandModel sideband_amplitudes (ModulationParams const& p);

// Unbounded SNR (no error at all) is reported as +infinity.
constexpr double unbounded_snr = std::numeric_limits<double>::infinity();
inline bool is_unbounded (double snr_db) noexcept { return snr_db == unbounded_snr; }

// SNR = A0^2 / (2 sqrt(2) sqrt(A1^2 + A2^2)), in dB (20 log10).
double predicted_snr (SidebandModel const& s);

struct ModulationFrequency {
  double omega_m;   // rad/s, 2 pi frac(I) fs
  double folded_hz; // |frac(I) fs| folded into [0, fs/2]
};

ModulationFrequency modulation_frequency (double increment, double fs_hz);

// Modulation parameters of a quadratic interpolator whose d sweeps `range`
// at carrier frequency freq_hz.
ModulationParams interpolator_modulation (double freq_hz, double fs_hz, DRange range, double omega_m = 0.0);

// Full chain: extrema -> sideband table -> SNR.
double predicted_snr_at (double freq_hz, double fs_hz, DRange range);

struct SidebandRow {
  double freq_hz;
  double a0;
  double a1;
  double a2;
  double snr_db;
};

std::vector<SidebandRow> sideband_spectrum_curve (DRange range, double fs_hz, std::span<double const> freqs_hz);

} // namespace fadline
