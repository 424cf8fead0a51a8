#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "fadline/measure.hpp"
#include "fadline/waveguide.hpp"

namespace fadline {

struct ExperimentParams {
  double        fs_hz       = 44100.0;
  std::size_t   buffer_size = 44100;
  double        increment   = 1.5; // delay 2/3 of the buffer
  std::uint64_t seed        = 1;
};

// Frequencies in [f_lo, f_hi] whose integer period divides the (integer)
// delay, at most `max_points` of them, spread evenly in log frequency,
// ascending.
std::vector<double> commensurate_frequencies (
  double      delay_samples,
  double      fs_hz,
  double      f_lo,
  double      f_hi,
  std::size_t max_points);

struct SnrRow {
  double freq_hz;
  double snr_db;
  double phase;
  double predicted_db;
};

// FAD line SNR over the commensurate grid in [fs/512, fs/8], one row per
// (frequency, initial phase).
std::vector<SnrRow> run_snr_experiment (ExperimentParams const& p, std::size_t phases = 8);

std::vector<AttenuationResult> run_attenuation_experiment (ExperimentParams const& p, std::size_t phases = 8);

struct RampSpec {
  double start_s    = 0.99;
  double end_s      = 0.5;
  double duration_s = 1.11;
  double rate() const { return (start_s - end_s) / duration_s; }
};

struct RampPitchResult {
  double                  k;
  double                  fad_expected;   // e^k
  double                  fir_expected;   // 1 + k
  double                  tau_i;          // (tau0 / k) (1 - e^-k)
  double                  fad_ratio;      // measured, steady part of the ramp
  double                  fir_ratio;
  double                  fad_settle_s;   // within 2% of e^k, from ramp start
  double                  fir_onset_s;    // within 1% of 1 + k, from ramp start
  double                  impulse_exit_s; // energy centroid, from ramp start
  double                  frame_s;        // analysis frame length
  double                  ramp_start_s;   // position of the ramp in the tracks
  std::vector<PitchPoint> fad_track;
  std::vector<PitchPoint> fir_track;
};

// Steady sine through FAD and FIR lines whose delay ramps from start_s to
// end_s, preceded by a pre-roll that brings both lines to steady state.
RampPitchResult run_ramp_pitch (
  ExperimentParams const& p,
  RampSpec const&         ramp  = {},
  double                  f0_hz = 200.0);

struct DitherResult {
  std::vector<SonogramFrame> static_frames;
  std::vector<SonogramFrame> modulated_frames;
  double                     static_dispersion;
  double                     modulated_dispersion;
};

struct DitherSpec {
  double      delay_from    = 100.0; // samples
  double      delay_to      = 110.0;
  double      duration_s    = 2.0;
  std::size_t pulse_period  = 16;
  double      dither_depth  = 0.5;   // samples
  double      dither_hz     = 441.0;
};

// Pulse train through a FIR line whose length slowly grows, with and
// without a small sinusoidal length dither.
DitherResult run_dither_sonogram (ExperimentParams const& p, DitherSpec const& spec = {});

std::vector<PitchDropReport> run_waveguide_experiment (ExperimentParams const& p);

// Runs `name` (snr, attenuation, sidebands, dither_sonogram, ramp_pitch,
// waveguide), writes its CSV files plus manifest.json into out_dir and
// returns the written paths.
std::vector<std::filesystem::path> cmd_experiment (
  std::string_view             name,
  std::filesystem::path const& out_dir,
  ExperimentParams const&      p = {});

} // namespace fadline
