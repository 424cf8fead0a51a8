#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "fadline/core.hpp"
#include "fadline/modmodel.hpp"
#include "fadline/spectrum.hpp"

namespace fadline {

template <class L>
concept DelayLineLike = requires (L& line, Sample x) {
  { line.tick (x) } -> std::convertible_to<Sample>;
  { line.nominal_delay() } -> std::convertible_to<double>;
};

// Clears the line; lines with a fractional pointer start it at `phase`.
template <DelayLineLike L>
void restart (L& line, double phase)
{
  if constexpr (requires { line.reset (phase); }) {
    line.reset (phase);
  }
  else if constexpr (requires { line.reset(); }) {
    line.reset();
  }
}

struct SnrResult {
  double freq_hz;
  double snr_db; // +inf when the error is exactly zero
  double initial_phase;
  double n;      // samples per period
};

struct AttenuationResult {
  double freq_hz;
  double min_gain_db;
  double max_gain_db;
  double mean_gain_db;
};

// Number of whole cycles (>= min_cycles) whose total length is an integer
// number of samples, and that length. Throws if none is found.
struct CycleWindow {
  std::size_t cycles;
  std::size_t samples;
};
CycleWindow cycle_window (double period_samples, std::size_t min_cycles);

// Checks that an integer number of periods fits the nominal delay.
void check_commensurate (double nominal_delay, double freq_hz, double fs_hz);

inline double sine_at (double freq_hz, double fs_hz, std::size_t n)
{
  return std::sin (2.0 * std::numbers::pi * freq_hz * static_cast<double> (n) / fs_hz);
}

// Signal-to-error ratio of a unit sine through `line`, output aligned with
// the input by the rounded nominal delay. The error is the sum of squared
// sample differences normalized by sqrt(2/N) per period, so a unit sine
// normalizes to 1:
//   snr_db = -20 log10 sqrt(2 / (cycles * N) * sum e^2)
template <DelayLineLike L>
SnrResult measure_snr (
  L&          line,
  double      freq_hz,
  double      fs_hz,
  double      initial_phase,
  std::size_t cycles = 4)
{
  check_commensurate (line.nominal_delay(), freq_hz, fs_hz);
  double const period = fs_hz / freq_hz;
  auto const   win    = cycle_window (period, cycles);
  auto const   delay  = static_cast<std::size_t> (std::llround (line.nominal_delay()));
  std::size_t const start = delay + 8;

  restart (line, initial_phase);
  double err = 0.0;
  for (std::size_t n = 0; n < start + win.samples; ++n) {
    double const y = line.tick (sine_at (freq_hz, fs_hz, n));
    if (n >= start) {
      double const e = y - sine_at (freq_hz, fs_hz, n - delay);
      err += e * e;
    }
  }
  double const snr = err == 0.0
    ? unbounded_snr
    : -10.0 * std::log10 (2.0 * err / static_cast<double> (win.samples));
  return {freq_hz, snr, initial_phase, period};
}

// Main-peak gain of a unit sine for every initial phase in `phases`.
// The steady output is analyzed over whole periods with a rectangular
// window, so the carrier falls exactly on one bin.
template <DelayLineLike L>
AttenuationResult measure_attenuation (
  L&                      line,
  double                  freq_hz,
  double                  fs_hz,
  std::span<double const> phases,
  std::size_t             cycles = 4)
{
  if (phases.size() < 8) {
    throw DomainError {"measure_attenuation: need at least 8 initial phases"};
  }
  check_commensurate (line.nominal_delay(), freq_hz, fs_hz);
  auto const win   = cycle_window (fs_hz / freq_hz, cycles);
  auto const delay = static_cast<std::size_t> (std::llround (line.nominal_delay()));
  std::size_t const start = delay + 8;

  std::vector<double> in (win.samples);
  std::vector<double> out (win.samples);
  RealFft             fft {win.samples};

  AttenuationResult r {freq_hz, 1e300, -1e300, 0.0};
  for (double ph : phases) {
    if (!(ph >= 0.0 && ph < 1.0)) {
      throw DomainError {"measure_attenuation: phases must lie in [0, 1)"};
    }
    restart (line, ph);
    for (std::size_t n = 0; n < start + win.samples; ++n) {
      double const x = sine_at (freq_hz, fs_hz, n);
      double const y = line.tick (x);
      if (n >= start) {
        in[n - start]  = x;
        out[n - start] = y;
      }
    }
    double const a_out = std::abs (fft.forward (out)[win.cycles]);
    double const a_in  = std::abs (fft.forward (in)[win.cycles]);
    double const db    = 20.0 * std::log10 (a_out / a_in);
    r.min_gain_db      = std::min (r.min_gain_db, db);
    r.max_gain_db      = std::max (r.max_gain_db, db);
    r.mean_gain_db += db;
  }
  r.mean_gain_db /= static_cast<double> (phases.size());
  return r;
}

// Evenly spaced initial phases in [0, 1).
std::vector<double> phase_grid (std::size_t count);

struct PitchPoint {
  double t_s; // frame center
  double hz;  // NaN marks a silent frame
};

// Per-frame dominant frequency: Hann window, 4x zero padding, parabolic
// interpolation of the log-magnitude peak.
std::vector<PitchPoint> pitch_track (
  std::span<double const> signal,
  double                  fs_hz,
  std::size_t             frame = 4096,
  std::size_t             hop   = 1024);

// Median frequency of the frames whose center lies in [t_begin, t_end].
double median_pitch (std::span<PitchPoint const> track, double t_begin, double t_end);

// Earliest frame time t >= t_from after which every frame up to t_to stays
// within rel_tol of target. NaN if the track never settles.
double settle_time (
  std::span<PitchPoint const> track,
  double                      target_hz,
  double                      rel_tol,
  double                      t_from,
  double                      t_to);

struct SonogramFrame {
  std::size_t         time_index;
  std::vector<double> db; // 129 bins
};

constexpr std::size_t sonogram_window = 256;
constexpr std::size_t sonogram_hop    = 128;
constexpr double      sonogram_floor_db = -120.0;

// 256-point Hann STFT, hop 128. Magnitudes are scaled so a full-scale sine
// centered on a bin, or a unit DC level, reads 0 dB.
std::vector<SonogramFrame> sonogram (std::span<double const> signal, double fs_hz);

// Band power of a frame in dB over bins [lo, hi].
double band_level_db (SonogramFrame const& f, std::size_t lo, std::size_t hi);

// How uniformly the dark frames are spread over a cyclic coordinate.
// Each frame carries a position theta in [0, 1) (e.g. the fractional delay
// at the frame center). Darkness is the band level below the loudest frame.
// Returns 1 - |sum w e^{2 pi i theta}| / sum w: near 0 when the valleys
// cluster at one position, near 1 when they are spread out.
double valley_dispersion (
  std::span<SonogramFrame const> frames,
  std::span<double const>        theta,
  std::size_t                    band_lo,
  std::size_t                    band_hi);

} // namespace fadline
