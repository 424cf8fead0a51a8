#include "fadline/measure.hpp"

#include <algorithm>
#include <complex>
#include <limits>

namespace fadline {

CycleWindow cycle_window (double period_samples, std::size_t min_cycles)
{
  if (!(period_samples >= 4.0)) {
    throw DomainError {"need at least 4 samples per period"};
  }
  for (std::size_t c = std::max<std::size_t> (min_cycles, 1); c <= 4096; ++c) {
    double const len = static_cast<double> (c) * period_samples;
    double const r   = std::round (len);
    if (std::abs (len - r) < 1e-6) {
      return {c, static_cast<std::size_t> (r)};
    }
  }
  throw DomainError {"no whole number of cycles spans an integer sample count"};
}

void check_commensurate (double nominal_delay, double freq_hz, double fs_hz)
{
  if (!(freq_hz > 0.0 && freq_hz < fs_hz * 0.5)) {
    throw DomainError {"frequency must lie in (0, fs/2)"};
  }
  double const periods = nominal_delay * freq_hz / fs_hz;
  double const whole   = std::round (periods);
  if (whole < 1.0 || std::abs (periods - whole) > 1e-6) {
    throw DomainError {
      "frequency " + std::to_string (freq_hz)
      + " Hz is not commensurate with the nominal delay"};
  }
}

std::vector<double> phase_grid (std::size_t count)
{
  std::vector<double> g (count);
  for (std::size_t i = 0; i < count; ++i) {
    g[i] = static_cast<double> (i) / static_cast<double> (count);
  }
  return g;
}

std::vector<PitchPoint> pitch_track (
  std::span<double const> signal,
  double                  fs_hz,
  std::size_t             frame,
  std::size_t             hop)
{
  if (frame < 1024 || (frame & (frame - 1)) != 0) {
    throw DomainError {"pitch_track: frame must be a power of two >= 1024"};
  }
  if (hop == 0) {
    throw DomainError {"pitch_track: hop must be positive"};
  }
  std::size_t const   nfft = frame * 4;
  RealFft             fft {nfft};
  auto const          win = hann_window (frame);
  std::vector<double> buf (frame);
  std::vector<double> mag (fft.bins());
  std::vector<PitchPoint> track;

  for (std::size_t start = 0; start + frame <= signal.size(); start += hop) {
    double energy = 0.0;
    for (std::size_t i = 0; i < frame; ++i) {
      buf[i] = signal[start + i] * win[i];
      energy += signal[start + i] * signal[start + i];
    }
    double const t = (static_cast<double> (start) + 0.5 * static_cast<double> (frame)) / fs_hz;
    if (energy / static_cast<double> (frame) < 1e-12) {
      track.push_back ({t, std::numeric_limits<double>::quiet_NaN()});
      continue;
    }
    auto const spec = fft.forward (buf);
    for (std::size_t k = 0; k < spec.size(); ++k) {
      mag[k] = std::abs (spec[k]);
    }
    auto const peak = static_cast<std::size_t> (
      std::max_element (mag.begin() + 2, mag.end() - 1) - mag.begin());
    double const a = std::log (mag[peak - 1] + 1e-300);
    double const b = std::log (mag[peak] + 1e-300);
    double const c = std::log (mag[peak + 1] + 1e-300);
    double const den = a - 2.0 * b + c;
    double const p   = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
    track.push_back ({t, (static_cast<double> (peak) + p) * fs_hz / static_cast<double> (nfft)});
  }
  return track;
}

double median_pitch (std::span<PitchPoint const> track, double t_begin, double t_end)
{
  std::vector<double> v;
  for (auto const& p : track) {
    if (p.t_s >= t_begin && p.t_s <= t_end && !std::isnan (p.hz)) {
      v.push_back (p.hz);
    }
  }
  if (v.empty()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  auto mid = v.begin() + static_cast<std::ptrdiff_t> (v.size() / 2);
  std::nth_element (v.begin(), mid, v.end());
  return *mid;
}

double settle_time (
  std::span<PitchPoint const> track,
  double                      target_hz,
  double                      rel_tol,
  double                      t_from,
  double                      t_to)
{
  double settled = std::numeric_limits<double>::quiet_NaN();
  for (auto const& p : track) {
    if (p.t_s < t_from || p.t_s > t_to) {
      continue;
    }
    bool const ok = !std::isnan (p.hz) && std::abs (p.hz / target_hz - 1.0) <= rel_tol;
    if (!ok) {
      settled = std::numeric_limits<double>::quiet_NaN();
    }
    else if (std::isnan (settled)) {
      settled = p.t_s;
    }
  }
  return settled;
}

std::vector<SonogramFrame> sonogram (std::span<double const> signal, double fs_hz)
{
  if (signal.size() < sonogram_window) {
    throw DomainError {"sonogram: signal shorter than one 256-sample window"};
  }
  if (!(fs_hz > 0.0)) {
    throw DomainError {"sonogram: sample rate must be positive"};
  }
  RealFft      fft {sonogram_window};
  auto const   win = hann_window (sonogram_window);
  double const scale = 2.0 / 128.0; // sum of a 256-point Hann is 128
  std::vector<double>        buf (sonogram_window);
  std::vector<SonogramFrame> frames;

  std::size_t idx = 0;
  for (std::size_t start = 0; start + sonogram_window <= signal.size(); start += sonogram_hop, ++idx) {
    for (std::size_t i = 0; i < sonogram_window; ++i) {
      buf[i] = signal[start + i] * win[i];
    }
    auto const    spec = fft.forward (buf);
    SonogramFrame f {idx, std::vector<double> (spec.size())};
    for (std::size_t k = 0; k < spec.size(); ++k) {
      // DC and Nyquist have no mirror image
      double const edge = (k == 0 || k + 1 == spec.size()) ? 0.5 : 1.0;
      double const m    = std::abs (spec[k]) * scale * edge;
      f.db[k]        = std::max (sonogram_floor_db, 20.0 * std::log10 (m + 1e-300));
    }
    frames.push_back (std::move (f));
  }
  return frames;
}

double band_level_db (SonogramFrame const& f, std::size_t lo, std::size_t hi)
{
  if (lo > hi || hi >= f.db.size()) {
    throw DomainError {"band_level_db: invalid band"};
  }
  double p = 0.0;
  for (std::size_t k = lo; k <= hi; ++k) {
    p += std::pow (10.0, f.db[k] / 10.0);
  }
  return 10.0 * std::log10 (p / static_cast<double> (hi - lo + 1));
}

double valley_dispersion (
  std::span<SonogramFrame const> frames,
  std::span<double const>        theta,
  std::size_t                    band_lo,
  std::size_t                    band_hi)
{
  if (frames.size() != theta.size() || frames.empty()) {
    throw DomainError {"valley_dispersion: need one position per frame"};
  }
  std::vector<double> level (frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    level[i] = band_level_db (frames[i], band_lo, band_hi);
  }
  double const loudest = *std::max_element (level.begin(), level.end());
  std::complex<double> acc {0.0, 0.0};
  double               total = 0.0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    double const w = loudest - level[i];
    acc += w * std::polar (1.0, 2.0 * std::numbers::pi * theta[i]);
    total += w;
  }
  if (total <= 0.0) {
    return 0.0;
  }
  return 1.0 - std::abs (acc) / total;
}

} // namespace fadline
