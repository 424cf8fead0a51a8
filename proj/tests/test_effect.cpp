#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "fadline/effect.hpp"
#include "fadline/wav.hpp"

using namespace fadline;
namespace fs = std::filesystem;

namespace {

fs::path temp_path (std::string const& name)
{
  return fs::temp_directory_path() / ("fadline_test_" + name);
}

template <class T>
void put (std::ofstream& o, T v)
{
  o.write (reinterpret_cast<char const*> (&v), sizeof v);
}

void write_raw_wav (fs::path const& p, std::uint16_t format, std::uint16_t channels, std::uint16_t bits)
{
  std::uint32_t const rate = 44100, frames = 16;
  std::uint32_t const data = frames * channels * (bits / 8);
  std::ofstream       o {p, std::ios::binary};
  o.write ("RIFF", 4);
  put<std::uint32_t> (o, 36 + data);
  o.write ("WAVEfmt ", 8);
  put<std::uint32_t> (o, 16);
  put<std::uint16_t> (o, format);
  put<std::uint16_t> (o, channels);
  put<std::uint32_t> (o, rate);
  put<std::uint32_t> (o, rate * channels * (bits / 8));
  put<std::uint16_t> (o, static_cast<std::uint16_t> (channels * (bits / 8)));
  put<std::uint16_t> (o, bits);
  o.write ("data", 4);
  put<std::uint32_t> (o, data);
  std::vector<char> zeros (data, 0);
  o.write (zeros.data(), static_cast<std::streamsize> (zeros.size()));
}

std::vector<double> noise (std::size_t n, std::uint64_t seed)
{
  std::mt19937_64                        rng {seed};
  std::uniform_real_distribution<double> u {-0.5, 0.5};
  std::vector<double>                    v (n);
  for (auto& x : v) {
    x = u (rng);
  }
  return v;
}

} // namespace

TEST_CASE ("WAV round trip is exact on the 16-bit grid")
{
  std::vector<double> x;
  for (int i = -100; i < 100; ++i) {
    x.push_back (i * 137 / 32768.0);
  }
  auto const p = temp_path ("roundtrip.wav");
  write_wav (p, 22050, x);
  auto const w = read_wav (p);
  CHECK (w.sample_rate == 22050);
  CHECK (w.samples == x);
  fs::remove (p);
}

TEST_CASE ("WAV writer saturates")
{
  CHECK (to_pcm16 (2.0) == 32767);
  CHECK (to_pcm16 (-2.0) == -32768);
  CHECK (to_pcm16 (0.0) == 0);
}

TEST_CASE ("unsupported WAV formats are rejected")
{
  auto const p = temp_path ("bad.wav");
  write_raw_wav (p, 1, 2, 16);
  CHECK_THROWS_WITH_AS (read_wav (p), doctest::Contains ("2 channel"), IoError);
  write_raw_wav (p, 1, 1, 24);
  CHECK_THROWS_AS (read_wav (p), IoError);
  write_raw_wav (p, 3, 1, 32);
  CHECK_THROWS_AS (read_wav (p), IoError);
  write_raw_wav (p, 1, 1, 16);
  CHECK_NOTHROW (read_wav (p));
  fs::remove (p);
  CHECK_THROWS_AS (read_wav (temp_path ("missing.wav")), IoError);
}

TEST_CASE ("static FAD effect at full buffer is a pure delay")
{
  auto const   x = noise (5000, 4);
  EffectConfig cfg;
  cfg.kind         = LineKind::fad;
  cfg.base_delay_s = 1000.0 / 44100.0;
  auto const y     = apply_effect (cfg, x);
  REQUIRE (y.size() == x.size() + 1000 + 2);
  for (std::size_t n = 0; n < x.size(); ++n) {
    REQUIRE (y[n + 1000] == x[n]);
  }
}

TEST_CASE ("static FIR effect is a pure delay")
{
  auto const   x = noise (5000, 4);
  EffectConfig cfg;
  cfg.kind         = LineKind::fir;
  cfg.base_delay_s = 250.0 / 44100.0;
  auto const y     = apply_effect (cfg, x);
  for (std::size_t n = 0; n < x.size(); ++n) {
    REQUIRE (y[n + 250] == x[n]);
  }
}

TEST_CASE ("configuration errors name the offending sample")
{
  EffectConfig cfg;
  cfg.kind         = LineKind::fad;
  cfg.base_delay_s = 0.01;
  cfg.buffer_size  = 441;
  cfg.modulation   = mod::Ramp {0.01, 0.5, 1.0};
  auto const d     = delay_trajectory (cfg, 44100);
  // the delay reaches B/2 = 220.5 samples at sample 441 and passes it next
  CHECK_THROWS_WITH_AS (resolve_buffer_size (cfg, d), doctest::Contains ("sample 442:"), ConfigError);

  cfg.kind        = LineKind::fir;
  cfg.modulation  = mod::None {};
  cfg.buffer_size = 100;
  CHECK_THROWS_WITH_AS (
    resolve_buffer_size (cfg, delay_trajectory (cfg, 10)), doctest::Contains ("sample 0:"), ConfigError);
}

TEST_CASE ("random walk is reproducible and bounded")
{
  EffectConfig cfg;
  cfg.base_delay_s = 0.2;
  cfg.modulation   = mod::RandomWalk {100, 0.01};
  cfg.seed         = 1234;
  auto const a     = delay_trajectory (cfg, 10'000);
  auto const b     = delay_trajectory (cfg, 10'000);
  CHECK (a == b);
  cfg.seed     = 1235;
  auto const c = delay_trajectory (cfg, 10'000);
  CHECK (a != c);

  double max_step = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK (std::abs (a[i] - 0.2) <= 0.01 + 1e-15);
    if (i > 0) {
      max_step = std::max (max_step, std::abs (a[i] - a[i - 1]));
    }
  }
  // linear segments: no sample-to-sample jump beyond the full span over one interval
  CHECK (max_step <= 2.0 * 0.01 / 100.0 + 1e-15);
}

TEST_CASE ("sine modulation trajectory")
{
  EffectConfig cfg;
  cfg.base_delay_s = 0.1;
  cfg.modulation   = mod::Sine {0.002, 1.0};
  auto const t     = delay_trajectory (cfg, 44100);
  CHECK (t[0] == doctest::Approx (0.1));
  CHECK (t[11025] == doctest::Approx (0.102));
  CHECK (t[33075] == doctest::Approx (0.098));
}

TEST_CASE ("modulated FAD run produces finite output")
{
  EffectConfig cfg;
  cfg.base_delay_s = 0.05;
  cfg.modulation   = mod::RandomWalk {100, 0.01};
  auto const y     = apply_effect (cfg, noise (20'000, 6));
  for (double v : y) {
    REQUIRE (std::isfinite (v));
  }
}

TEST_CASE ("delay command on files")
{
  auto const in  = temp_path ("in.wav");
  auto const out = temp_path ("out.wav");
  std::vector<double> x (1000, 0.0);
  x[0] = 0.5;
  write_wav (in, 8000, x);
  EffectConfig cfg;
  cfg.base_delay_s = 0.01; // 80 samples at the file's rate
  CHECK (cmd_delay (in, out, cfg) == 0);
  auto const w = read_wav (out);
  CHECK (w.sample_rate == 8000);
  REQUIRE (w.samples.size() > 80);
  CHECK (w.samples[80] == 0.5);
  fs::remove (in);
  fs::remove (out);
}
