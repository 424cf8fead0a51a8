#include "fadline/modmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fadline {

double bessel_j (int order, double x)
{
  if (order < 0 || order > 3) {
    throw DomainError {"bessel_j: order must be in 0..3"};
  }
  if (!(x >= 0.0 && x <= 20.0)) {
    throw DomainError {"bessel_j: argument must be in [0, 20]"};
  }
  // Ascending series sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!). Terms peak
  // near 1e7 at x = 20, so the sum is carried in extended precision.
  long double const h   = static_cast<long double> (x) * 0.5L;
  long double const hh  = h * h;
  long double       term = 1.0L;
  for (int i = 1; i <= order; ++i) {
    term *= h / static_cast<long double> (i);
  }
  long double sum = term;
  for (int k = 1; k < 120; ++k) {
    term *= -hh / (static_cast<long double> (k) * static_cast<long double> (k + order));
    sum += term;
    if (std::abs (term) < 1e-22L) {
      break;
    }
  }
  return static_cast<double> (sum);
}

SidebandModel sideband_amplitudes (ModulationParams const& p)
{
  if (!(p.a_min > 0.0 && p.a_min <= 1.0)) {
    throw DomainError {"sideband_amplitudes: a_min must be in (0, 1]"};
  }
  if (!(p.tau_max >= 0.0)) {
    throw DomainError {"sideband_amplitudes: tau_max must be non-negative"};
  }
  SidebandModel s {};
  s.m          = (1.0 - p.a_min) / (1.0 + p.a_min);
  s.a_m        = (1.0 + p.a_min) * 0.5;
  double const x  = p.tau_max * p.omega0;
  double const j0 = bessel_j (0, x);
  double const j1 = bessel_j (1, x);
  double const j2 = bessel_j (2, x);
  double const half_am = s.m * s.a_m * 0.5;
  s.a0 = s.a_m * j0 + s.m * s.a_m * j2;
  s.a1 = std::abs (s.a_m * j1 - half_am * j1);
  s.a2 = s.a_m * j2 + half_am * j0;
  return s;
}

double predicted_snr (SidebandModel const& s)
{
  constexpr double tiny = 1e-15;
  if (std::abs (s.a1) < tiny && std::abs (s.a2) < tiny) {
    return unbounded_snr;
  }
  double const ratio
    = s.a0 * s.a0 / (2.0 * std::numbers::sqrt2 * std::hypot (s.a1, s.a2));
  return 20.0 * std::log10 (ratio);
}

ModulationFrequency modulation_frequency (double increment, double fs_hz)
{
  if (!(increment >= 1.0 && increment <= 2.0)) {
    throw DomainError {"modulation_frequency: increment outside [1, 2]"};
  }
  double const frac   = increment - std::floor (increment);
  double const f_m    = frac * fs_hz;
  double       folded = std::fmod (f_m, fs_hz);
  if (folded > fs_hz * 0.5) {
    folded = fs_hz - folded;
  }
  return {2.0 * std::numbers::pi * f_m, folded};
}

ModulationParams interpolator_modulation (double freq_hz, double fs_hz, DRange range, double omega_m)
{
  auto const ex = response_extrema (freq_hz, fs_hz, range);
  return {
    ex.a_min,
    std::max (std::abs (ex.tau_min), std::abs (ex.tau_max)),
    2.0 * std::numbers::pi * freq_hz / fs_hz,
    omega_m};
}

double predicted_snr_at (double freq_hz, double fs_hz, DRange range)
{
  return predicted_snr (sideband_amplitudes (interpolator_modulation (freq_hz, fs_hz, range)));
}

std::vector<SidebandRow> sideband_spectrum_curve (DRange range, double fs_hz, std::span<double const> freqs_hz)
{
  std::vector<SidebandRow> rows;
  rows.reserve (freqs_hz.size());
  for (double f : freqs_hz) {
    auto const s = sideband_amplitudes (interpolator_modulation (f, fs_hz, range));
    rows.push_back ({f, s.a0, s.a1, s.a2, predicted_snr (s)});
  }
  return rows;
}

} // namespace fadline
