// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fadline/bench.hpp"
#include "fadline/core.hpp"
#include "fadline/experiments.hpp"
#include "fadline/fad_line.hpp"
#include "fadline/fir_line.hpp"
#include "fadline/measure.hpp"
#include "fadline/waveguide.hpp"

using namespace fadline;

namespace {

struct Outcome {
  bool        pass;
  std::string detail;
};

char buf[512];

template <class... A>
std::string fmt (char const* f, A... a)
{
  std::snprintf (buf, sizeof buf, f, a...);
  return buf;
}

bool within_rel (double value, double target, double tol)
{
  return std::abs (value / target - 1.0) <= tol;
}

RampPitchResult const& ramp()
{
  static RampPitchResult const r = run_ramp_pitch ({});
  return r;
}

Outcome fad_pitch_law()
{
  auto const& r = ramp();
  return {within_rel (r.fad_ratio, r.fad_expected, 0.01),
          fmt ("ratio %.5f, e^k %.5f", r.fad_ratio, r.fad_expected)};
}

Outcome fad_transient()
{
  auto const& r = ramp();
  return {within_rel (r.impulse_exit_s, r.tau_i, 0.02),
          fmt ("impulse exit %.5f s, tau_i %.5f s", r.impulse_exit_s, r.tau_i)};
}

Outcome fir_doppler()
{
  auto const& r  = ramp();
  bool const  ok = within_rel (r.fir_ratio, r.fir_expected, 0.01) && r.fir_onset_s >= 0.0
    && r.fir_onset_s <= 2.0 * r.frame_s;
  return {ok, fmt ("ratio %.5f, 1+k %.5f, onset %.4f s (frame %.4f s)", r.fir_ratio, r.fir_expected,
                   r.fir_onset_s, r.frame_s)};
}

Outcome snr_bound()
{
  auto const rows  = run_snr_experiment ({}, 8);
  double     worst = 1e300, f_lo = 1e300, f_hi = 0.0;
  std::vector<double> freqs;
  for (auto const& r : rows) {
    worst = std::min (worst, r.snr_db - r.predicted_db);
    f_lo  = std::min (f_lo, r.freq_hz);
    f_hi  = std::max (f_hi, r.freq_hz);
    if (freqs.empty() || freqs.back() != r.freq_hz) {
      freqs.push_back (r.freq_hz);
    }
  }
  double const fs = 44100.0;
  bool const   ok = freqs.size() >= 12 && worst >= -1.0 && f_lo >= fs / 512 && f_hi <= fs / 8;
  return {ok, fmt ("%zu frequencies in [%.1f, %.1f] Hz, min(measured - predicted) %.2f dB", freqs.size(),
                   f_lo, f_hi, worst)};
}

Outcome exactness()
{
  std::mt19937_64                        rng {2024};
  std::uniform_real_distribution<double> u {-1.0, 1.0};
  std::vector<double>                    x (1'000'000);
  for (auto& v : x) {
    v = u (rng);
  }
  std::size_t const b   = 4096;
  auto              fad = FadLine::with_increment (b, 44100.0, 1.0);
  FirLine           fir {b, 1234.0};
  std::size_t       fad_err = 0, fir_err = 0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    double const yf = fad.tick (x[n]);
    double const yr = fir.tick (x[n]);
    fad_err += yf != (n >= b ? x[n - b] : 0.0);
    fir_err += yr != (n >= 1234 ? x[n - 1234] : 0.0);
  }
  return {fad_err == 0 && fir_err == 0, fmt ("mismatches: FAD %zu, FIR %zu", fad_err, fir_err)};
}

Outcome magnitude_bound()
{
  double worst = 0.0;
  for (int i = 0; i < 256; ++i) {
    double const d = -1.0 + 2.0 * i / 255.0;
    for (int j = 0; j < 256; ++j) {
      worst = std::max (worst, lagrange2_response (FracOffset {d}, 22050.0 * j / 255.0, 44100.0).magnitude);
    }
  }
  return {worst <= 1.0 + 1e-9, fmt ("max gain %.15f", worst)};
}

struct LapProbe {
  std::vector<std::size_t> count;
  std::size_t              last   = 0;
  std::size_t              total  = 0;
  bool                     broken = false;
  void on_write (std::size_t c)
  {
    if (total > 0 && c != (last + 1) % count.size()) {
      broken = true;
    }
    ++count[c];
    last = c;
    ++total;
  }
};

Outcome no_holes()
{
  std::size_t const b    = 1009;
  auto              line = BasicFadLine<LapProbe>::with_increment (b, 44100.0, 1.0);
  line.probe().count.assign (b, 0);
  std::mt19937_64                        rng {77};
  std::uniform_real_distribution<double> u {1.0, 2.0};
  for (int n = 0; n < 1'000'000; ++n) {
    line.set_increment (u (rng));
    line.tick (0.0);
  }
  auto const& p    = line.probe();
  // cells up to the last written one have seen one more lap than the rest
  std::size_t const laps = p.total / b;
  std::size_t const extra = p.total % b;
  bool ok = !p.broken;
  for (std::size_t c = 0; c < b; ++c) {
    ok = ok && p.count[c] == laps + (c < extra ? 1 : 0);
  }
  return {ok, fmt ("%zu writes, %zu full laps, sequential %s", p.total, laps, p.broken ? "no" : "yes")};
}

struct CountProbe {
  std::size_t writes = 0;
  void        on_write (std::size_t) { ++writes; }
};

Outcome write_multiplicity()
{
  std::size_t const n    = 500'000;
  auto              line = BasicFadLine<CountProbe>::with_increment (44100, 44100.0, 1.5);
  for (std::size_t i = 0; i < 2 * n; ++i) {
    line.tick (0.0);
  }
  auto const w  = static_cast<long long> (line.probe().writes);
  bool const ok = std::llabs (w - 3 * static_cast<long long> (n)) <= 1;
  return {ok, fmt ("%lld writes over %zu ticks (expected %zu +- 1)", w, 2 * n, 3 * n)};
}

Outcome timbre_split()
{
  auto const fad   = run_pitch_drop (LineKind::fad);
  auto const erase = run_pitch_drop (LineKind::fir_erase);
  auto const fir   = run_pitch_drop (LineKind::fir);
  bool const fad_ok   = within_rel (fad.duration_ratio(), fad.period_ratio(), 0.03) && fad.period_ratio() > 1.03;
  bool const erase_ok = erase.period_ratio() > 1.03 && std::abs (erase.duration_ratio() - 1.0) <= 0.03;
  bool const ghost_ok = fir.events_per_period_after >= 2.0 && std::abs (fad.events_per_period_after - 1.0) < 0.05
    && std::abs (erase.events_per_period_after - 1.0) < 0.05;
  return {fad_ok && erase_ok && ghost_ok,
          fmt ("FAD period x%.4f duration x%.4f; FIR-erase period x%.4f duration x%.4f; "
               "events/period after: FIR %.2f, FIR-erase %.2f, FAD %.2f",
               fad.period_ratio(), fad.duration_ratio(), erase.period_ratio(), erase.duration_ratio(),
               fir.events_per_period_after, erase.events_per_period_after, fad.events_per_period_after)};
}

Outcome benchmark()
{
  std::vector<std::size_t> sizes;
  for (int e = 10; e <= 22; ++e) {
    sizes.push_back (std::size_t {1} << e);
  }
  BenchOptions opt;
  opt.ticks       = 1'000'000;
  opt.repetitions = 14;
  auto const res  = run_bench (sizes, opt);
  auto const csv  = std::filesystem::temp_directory_path() / "fadline_acceptance_bench.csv";
  write_bench_csv (csv, res);
  bool        ok         = res.size() == sizes.size();
  std::size_t violations = 0;
  double      worst      = -1e300;
  for (auto const& r : res) {
    ok = ok && r.repetitions == 14 && std::isfinite (r.caching_cost_pct());
    violations += r.fir_no_increment_ns > r.fir_ns;
    worst = std::max (worst, r.fir_no_increment_ns - r.fir_ns);
  }
  std::filesystem::remove (csv);
  return {ok && violations == 0,
          fmt ("%zu sizes, ordering violations %zu, caching cost %.1f%% .. %.1f%%", res.size(), violations,
               res.front().caching_cost_pct(), res.back().caching_cost_pct())};
}

Outcome dither()
{
  auto const dir   = std::filesystem::temp_directory_path() / "fadline_acceptance_dither";
  std::filesystem::remove_all (dir);
  cmd_experiment ("dither_sonogram", dir);
  bool const files = std::filesystem::exists (dir / "sonogram_static.csv")
    && std::filesystem::exists (dir / "sonogram_modulated.csv");
  std::filesystem::remove_all (dir);
  auto const r  = run_dither_sonogram ({});
  bool const ok = files && r.modulated_dispersion > r.static_dispersion
    && r.static_frames.front().db.size() == sonogram_window / 2 + 1;
  return {ok, fmt ("dispersion static %.4f, modulated %.4f", r.static_dispersion, r.modulated_dispersion)};
}

} // namespace

int main()
{
  struct Criterion {
    char const*              name;
    std::function<Outcome()> run;
    double                   budget_s; // 0: none
  };
  std::vector<Criterion> const all {
    {"FAD pitch-shift law", fad_pitch_law, 10.0},
    {"FAD transient time", fad_transient, 5.0},
    {"FIR Doppler law", fir_doppler, 0.0},
    {"SNR lower bound", snr_bound, 60.0},
    {"exactness degeneracies", exactness, 0.0},
    {"magnitude bound", magnitude_bound, 0.0},
    {"no-holes invariant", no_holes, 0.0},
    {"write multiplicity", write_multiplicity, 0.0},
    {"waveguide timbre split", timbre_split, 0.0},
    {"benchmark methodology", benchmark, 0.0},
    {"dithering experiment", dither, 0.0},
  };

  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto const t0 = std::chrono::steady_clock::now();
    Outcome    o;
    try {
      o = all[i].run();
    }
    catch (std::exception const& e) {
      o = {false, std::string {"exception: "} + e.what()};
    }
    double const secs = std::chrono::duration<double> (std::chrono::steady_clock::now() - t0).count();
    if (all[i].budget_s > 0.0 && secs > all[i].budget_s) {
      o.pass = false;
      o.detail += fmt (" [over the %.0f s budget]", all[i].budget_s);
    }
    failed += !o.pass;
    std::printf ("%s  %2zu  %-24s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, all[i].name, o.detail.c_str(), secs);
    std::fflush (stdout);
  }
  std::printf ("%zu/%zu criteria passed\n", all.size() - failed, all.size());
  return failed == 0 ? 0 : 1;
}
