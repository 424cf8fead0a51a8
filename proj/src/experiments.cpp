#include "fadline/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <string>

#include <json.hpp>

#include "fadline/effect.hpp"
#include "fadline/fad_line.hpp"
#include "fadline/fir_line.hpp"
#include "fadline/modmodel.hpp"
#include "fadline/wav.hpp"

namespace fadline {

namespace {

constexpr double csv_snr_cap = 200.0;

double cap_db (double db)
{
  return std::min (db, csv_snr_cap);
}

std::ofstream open_csv (std::filesystem::path const& path, char const* header)
{
  std::ofstream os {path};
  if (!os) {
    throw IoError {"cannot create '" + path.string() + "'"};
  }
  os.precision (10);
  os << header << '\n';
  return os;
}

void write_sonogram (std::filesystem::path const& path, std::vector<SonogramFrame> const& frames)
{
  auto os = open_csv (path, "frame,bin,db");
  os.precision (6);
  for (auto const& f : frames) {
    for (std::size_t k = 0; k < f.db.size(); ++k) {
      os << f.time_index << ',' << k << ',' << f.db[k] << '\n';
    }
  }
}

void write_pitch (std::filesystem::path const& path, std::vector<PitchPoint> const& track, double t0)
{
  auto os = open_csv (path, "t_s,hz");
  for (auto const& p : track) {
    os << (p.t_s - t0) << ',';
    if (!std::isnan (p.hz)) {
      os << p.hz;
    }
    os << '\n';
  }
}

double fad_delay_samples (ExperimentParams const& p)
{
  return static_cast<double> (p.buffer_size) / p.increment;
}

nlohmann::json base_manifest (std::string_view name, ExperimentParams const& p)
{
  return {
    {"experiment", name},
    {"fs_hz", p.fs_hz},
    {"buffer_size", p.buffer_size},
    {"increment", p.increment},
    {"seed", p.seed}};
}

} // namespace

std::vector<double> commensurate_frequencies (
  double      delay_samples,
  double      fs_hz,
  double      f_lo,
  double      f_hi,
  std::size_t max_points)
{
  auto const d = static_cast<long long> (std::llround (delay_samples));
  if (std::abs (delay_samples - static_cast<double> (d)) > 1e-9 || d < 4) {
    throw DomainError {"commensurate_frequencies: the delay must be an integer number of samples"};
  }
  std::vector<long long> periods; // descending period = ascending frequency
  for (long long n = d; n >= 4; --n) {
    double const f = fs_hz / static_cast<double> (n);
    if (d % n == 0 && f >= f_lo && f <= f_hi) {
      periods.push_back (n);
    }
  }
  if (periods.size() <= max_points || max_points < 2) {
    std::vector<double> out;
    for (auto n : periods) {
      out.push_back (fs_hz / static_cast<double> (n));
    }
    return out;
  }
  std::set<std::size_t> picked;
  double const lo = std::log (static_cast<double> (periods.front()));
  double const hi = std::log (static_cast<double> (periods.back()));
  for (std::size_t i = 0; i < max_points; ++i) {
    double const target = lo + (hi - lo) * static_cast<double> (i) / static_cast<double> (max_points - 1);
    std::size_t  best   = 0;
    for (std::size_t j = 1; j < periods.size(); ++j) {
      if (std::abs (std::log (static_cast<double> (periods[j])) - target)
          < std::abs (std::log (static_cast<double> (periods[best])) - target)) {
        best = j;
      }
    }
    picked.insert (best);
  }
  std::vector<double> out;
  for (auto i : picked) {
    out.push_back (fs_hz / static_cast<double> (periods[i]));
  }
  return out;
}

std::vector<SnrRow> run_snr_experiment (ExperimentParams const& p, std::size_t phases)
{
  auto const freqs = commensurate_frequencies (
    fad_delay_samples (p), p.fs_hz, p.fs_hz / 512.0, p.fs_hz / 8.0, 16);
  auto line = FadLine::with_increment (p.buffer_size, p.fs_hz, p.increment);
  std::vector<SnrRow> rows;
  for (double f : freqs) {
    double const predicted = predicted_snr_at (f, p.fs_hz, {-0.5, 0.5});
    for (double ph : phase_grid (phases)) {
      auto const r = measure_snr (line, f, p.fs_hz, ph);
      rows.push_back ({f, r.snr_db, ph, predicted});
    }
  }
  return rows;
}

std::vector<AttenuationResult> run_attenuation_experiment (ExperimentParams const& p, std::size_t phases)
{
  auto const freqs = commensurate_frequencies (
    fad_delay_samples (p), p.fs_hz, p.fs_hz / 512.0, p.fs_hz / 8.0, 16);
  auto       line = FadLine::with_increment (p.buffer_size, p.fs_hz, p.increment);
  auto const grid = phase_grid (phases);
  std::vector<AttenuationResult> rows;
  for (double f : freqs) {
    rows.push_back (measure_attenuation (line, f, p.fs_hz, grid));
  }
  return rows;
}

RampPitchResult run_ramp_pitch (ExperimentParams const& p, RampSpec const& ramp, double f0_hz)
{
  double const fs = p.fs_hz;
  RampPitchResult r {};
  r.k            = ramp.rate();
  r.fad_expected = std::exp (r.k);
  r.fir_expected = 1.0 + r.k;
  r.tau_i        = ramp.start_s / r.k * (1.0 - std::exp (-r.k));

  std::size_t const frame = 4096;
  std::size_t const hop   = 1024;
  r.frame_s               = static_cast<double> (frame) / fs;

  auto const pre   = static_cast<std::size_t> (std::ceil ((ramp.start_s + 0.25) * fs));
  auto const after = static_cast<std::size_t> (std::ceil ((ramp.duration_s + 1.0) * fs));
  std::size_t const total = pre + after;
  r.ramp_start_s          = static_cast<double> (pre) / fs;

  // buffer spans the longest delay; FIR gets a little headroom for its guard cells
  auto const fad_b = static_cast<std::size_t> (std::ceil (ramp.start_s * fs - 1e-9));
  FadLine    fad {fad_b, fs, ramp.start_s};
  FadLine    fad_impulse {fad_b, fs, ramp.start_s};
  FirLine    fir {static_cast<std::size_t> (std::ceil (ramp.start_s * fs)) + 3, ramp.start_s * fs};

  std::vector<double> y_fad (total), y_fir (total);
  double              e_sum = 0.0, t_sum = 0.0;
  for (std::size_t n = 0; n < total; ++n) {
    double const t = (static_cast<double> (n) - static_cast<double> (pre)) / fs;
    double const T = ramp.start_s - r.k * std::clamp (t, 0.0, ramp.duration_s);
    fad.set_delay (T);
    fad_impulse.set_delay (T);
    fir.set_delay (T * fs);
    double const x = sine_at (f0_hz, fs, n);
    y_fad[n]       = fad.tick (x);
    y_fir[n]       = fir.tick (x);
    double const yi = fad_impulse.tick (n == pre ? 1.0 : 0.0);
    e_sum += yi * yi;
    t_sum += yi * yi * t;
  }
  r.impulse_exit_s = e_sum > 0.0 ? t_sum / e_sum : std::nan ("");

  r.fad_track = pitch_track (y_fad, fs, frame, hop);
  r.fir_track = pitch_track (y_fir, fs, frame, hop);

  double const t0   = r.ramp_start_s;
  double const half = 0.5 * r.frame_s;
  // steady FAD part: after the transient and before the ramp stops
  r.fad_ratio = median_pitch (r.fad_track, t0 + r.tau_i + half, t0 + ramp.duration_s - half) / f0_hz;
  r.fir_ratio = median_pitch (r.fir_track, t0 + half, t0 + ramp.duration_s - half) / f0_hz;
  r.fad_settle_s
    = settle_time (r.fad_track, r.fad_expected * f0_hz, 0.02, t0, t0 + ramp.duration_s - half) - t0;
  r.fir_onset_s
    = settle_time (r.fir_track, r.fir_expected * f0_hz, 0.01, t0, t0 + ramp.duration_s - half) - t0;
  return r;
}

DitherResult run_dither_sonogram (ExperimentParams const& p, DitherSpec const& spec)
{
  double const      fs    = p.fs_hz;
  auto const        total = static_cast<std::size_t> (spec.duration_s * fs);
  auto const        cap   = static_cast<std::size_t> (std::ceil (spec.delay_to + spec.dither_depth)) + 4;
  std::vector<double> ys (total), ym (total), base (total);

  FirLine plain {cap, spec.delay_from};
  FirLine dithered {cap, spec.delay_from};
  for (std::size_t n = 0; n < total; ++n) {
    double const a = static_cast<double> (n) / static_cast<double> (total);
    base[n]        = spec.delay_from + (spec.delay_to - spec.delay_from) * a;
    double const dither
      = spec.dither_depth * std::sin (2.0 * std::numbers::pi * spec.dither_hz * static_cast<double> (n) / fs);
    plain.set_delay (base[n]);
    dithered.set_delay (base[n] + dither);
    double const x = n % spec.pulse_period == 0 ? 1.0 : 0.0;
    ys[n]          = plain.tick (x);
    ym[n]          = dithered.tick (x);
  }

  DitherResult r;
  r.static_frames    = sonogram (ys, fs);
  r.modulated_frames = sonogram (ym, fs);

  // position of each frame within the fractional-delay cycle
  std::vector<double> theta;
  for (auto const& f : r.static_frames) {
    std::size_t const c = std::min (total - 1, f.time_index * sonogram_hop + sonogram_window / 2);
    theta.push_back (base[c] - std::floor (base[c]));
  }
  std::size_t const lo = sonogram_window / 4;
  std::size_t const hi = sonogram_window / 2;
  r.static_dispersion    = valley_dispersion (r.static_frames, theta, lo, hi);
  r.modulated_dispersion = valley_dispersion (r.modulated_frames, theta, lo, hi);
  return r;
}

std::vector<PitchDropReport> run_waveguide_experiment (ExperimentParams const& p)
{
  PitchDropConfig cfg;
  cfg.fs_hz = p.fs_hz;
  std::vector<PitchDropReport> out;
  for (auto k : {LineKind::fir, LineKind::fir_erase, LineKind::fad}) {
    out.push_back (run_pitch_drop (k, cfg));
  }
  return out;
}

std::vector<std::filesystem::path> cmd_experiment (
  std::string_view             name,
  std::filesystem::path const& out_dir,
  ExperimentParams const&      p)
{
  std::filesystem::create_directories (out_dir);
  std::vector<std::filesystem::path> files;
  auto manifest = base_manifest (name, p);
  auto path     = [&] (char const* file) {
    files.push_back (out_dir / file);
    return files.back();
  };

  if (name == "snr") {
    auto const rows = run_snr_experiment (p);
    auto       os   = open_csv (path ("snr.csv"), "freq_hz,snr_db,phase");
    bool       bound_holds = true;
    for (auto const& r : rows) {
      os << r.freq_hz << ',' << cap_db (r.snr_db) << ',' << r.phase << '\n';
      bound_holds = bound_holds && r.snr_db >= r.predicted_db - 1.0;
    }
    manifest["phases"]            = 8;
    manifest["cycles"]            = 4;
    manifest["lower_bound_holds"] = bound_holds;
    manifest["snr_cap_db"]        = csv_snr_cap;
  }
  else if (name == "attenuation") {
    auto const rows = run_attenuation_experiment (p);
    auto       os   = open_csv (path ("att.csv"), "freq_hz,min_db,max_db,mean_db");
    for (auto const& r : rows) {
      os << r.freq_hz << ',' << r.min_gain_db << ',' << r.max_gain_db << ',' << r.mean_gain_db << '\n';
    }
    manifest["phases"] = 8;
  }
  else if (name == "sidebands") {
    std::vector<double> freqs;
    for (int i = 1; i <= 512; ++i) {
      freqs.push_back (p.fs_hz * 0.5 * static_cast<double> (i) / 512.0);
    }
    auto const rows = sideband_spectrum_curve ({-0.5, 0.5}, p.fs_hz, freqs);
    auto       os   = open_csv (path ("sidebands.csv"), "frequency_hz,A0,A1,A2,snr_db");
    for (auto const& r : rows) {
      os << r.freq_hz << ',' << r.a0 << ',' << r.a1 << ',' << r.a2 << ',' << cap_db (r.snr_db) << '\n';
    }
    manifest["d_interval"] = {-0.5, 0.5};
  }
  else if (name == "dither_sonogram") {
    DitherSpec const spec;
    auto const       r = run_dither_sonogram (p, spec);
    write_sonogram (path ("sonogram_static.csv"), r.static_frames);
    write_sonogram (path ("sonogram_modulated.csv"), r.modulated_frames);
    manifest["window"]               = "hann";
    manifest["window_length"]        = sonogram_window;
    manifest["hop"]                  = sonogram_hop;
    manifest["delay_from_samples"]   = spec.delay_from;
    manifest["delay_to_samples"]     = spec.delay_to;
    manifest["pulse_period"]         = spec.pulse_period;
    manifest["dither_depth_samples"] = spec.dither_depth;
    manifest["dither_hz"]            = spec.dither_hz;
    manifest["static_dispersion"]    = r.static_dispersion;
    manifest["modulated_dispersion"] = r.modulated_dispersion;
  }
  else if (name == "ramp_pitch") {
    RampSpec const ramp;
    auto const     r = run_ramp_pitch (p, ramp);
    write_pitch (path ("pitch.csv"), r.fad_track, r.ramp_start_s);
    write_pitch (path ("pitch_fir.csv"), r.fir_track, r.ramp_start_s);
    manifest["ramp_start_s"]     = ramp.start_s;
    manifest["ramp_end_s"]       = ramp.end_s;
    manifest["ramp_duration_s"]  = ramp.duration_s;
    manifest["k"]                = r.k;
    manifest["fad_expected"]     = r.fad_expected;
    manifest["fad_measured"]     = r.fad_ratio;
    manifest["fir_expected"]     = r.fir_expected;
    manifest["fir_measured"]     = r.fir_ratio;
    manifest["tau_i_s"]          = r.tau_i;
    manifest["impulse_exit_s"]   = r.impulse_exit_s;
    manifest["fad_settle_s"]     = r.fad_settle_s;
  }
  else if (name == "waveguide") {
    auto const reports = run_waveguide_experiment (p);
    auto       ev      = open_csv (path ("waveguide_events.csv"), "kind,onset,duration");
    for (auto const& r : reports) {
      std::string const file = "waveguide_" + std::string {to_string (r.kind)} + ".csv";
      files.push_back (out_dir / file);
      auto wf = open_csv (files.back(), "n,value");
      for (std::size_t i = 0; i < r.waveform.size(); ++i) {
        wf << i << ',' << r.waveform[i] << '\n';
      }
      for (auto const& e : r.events) {
        ev << to_string (r.kind) << ',' << e.onset << ',' << e.duration << '\n';
      }
      manifest[std::string {to_string (r.kind)}] = {
        {"drop_tick", r.drop_tick},
        {"period_before", r.period_before},
        {"period_after", r.period_after},
        {"duration_before", r.duration_before},
        {"duration_after", r.duration_after},
        {"events_per_period_after", r.events_per_period_after}};
    }
  }
  else {
    throw ConfigError {
      "unknown experiment '" + std::string {name}
      + "' (expected snr, attenuation, sidebands, dither_sonogram, ramp_pitch, waveguide)"};
  }

  std::ofstream mf {path ("manifest.json")};
  mf << manifest.dump (2) << '\n';
  return files;
}

} // namespace fadline
