#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "fadline/bench.hpp"
#include "fadline/effect.hpp"
#include "fadline/experiments.hpp"

using namespace fadline;
namespace fs = std::filesystem;

namespace {

std::string first_line (fs::path const& p)
{
  std::ifstream in {p};
  std::string   line;
  std::getline (in, line);
  return line;
}

std::size_t line_count (fs::path const& p)
{
  std::ifstream in {p};
  std::string   line;
  std::size_t   n = 0;
  while (std::getline (in, line)) {
    ++n;
  }
  return n;
}

fs::path scratch (std::string const& name)
{
  auto p = fs::temp_directory_path() / ("fadline_exp_" + name);
  fs::remove_all (p);
  return p;
}

} // namespace

TEST_CASE ("commensurate frequencies divide the delay")
{
  auto const f = commensurate_frequencies (29400.0, 44100.0, 44100.0 / 512, 44100.0 / 8, 16);
  REQUIRE (f.size() == 16);
  for (std::size_t i = 0; i < f.size(); ++i) {
    double const period = 44100.0 / f[i];
    CHECK (std::abs (period - std::round (period)) < 1e-9);
    CHECK (static_cast<long> (29400) % std::lround (period) == 0);
    if (i > 0) {
      CHECK (f[i] > f[i - 1]);
    }
  }
  CHECK (f.front() >= 44100.0 / 512);
  CHECK (f.back() <= 44100.0 / 8);
}

TEST_CASE ("SNR experiment rows")
{
  auto const rows = run_snr_experiment ({}, 8);
  REQUIRE (rows.size() == 16 * 8);
  for (auto const& r : rows) {
    CHECK (r.snr_db >= r.predicted_db);
  }
}

TEST_CASE ("experiment files and headers")
{
  struct Expect {
    char const* name;
    char const* file;
    char const* header;
  };
  Expect const cases[] {
    {"snr", "snr.csv", "freq_hz,snr_db,phase"},
    {"attenuation", "att.csv", "freq_hz,min_db,max_db,mean_db"},
    {"sidebands", "sidebands.csv", "frequency_hz,A0,A1,A2,snr_db"},
    {"dither_sonogram", "sonogram_static.csv", "frame,bin,db"},
    {"dither_sonogram", "sonogram_modulated.csv", "frame,bin,db"},
    {"ramp_pitch", "pitch.csv", "t_s,hz"},
    {"ramp_pitch", "pitch_fir.csv", "t_s,hz"},
    {"waveguide", "waveguide_fad.csv", "n,value"},
    {"waveguide", "waveguide_events.csv", "kind,onset,duration"},
  };
  for (auto const& c : cases) {
    CAPTURE (c.name);
    auto const dir = scratch (c.name);
    auto const out = cmd_experiment (c.name, dir);
    CHECK (!out.empty());
    CHECK (first_line (dir / c.file) == c.header);
    CHECK (line_count (dir / c.file) > 1);
    REQUIRE (fs::exists (dir / "manifest.json"));
    std::ifstream m {dir / "manifest.json"};
    auto const    j = nlohmann::json::parse (m);
    CHECK (j.at ("experiment") == c.name);
    fs::remove_all (dir);
  }
  CHECK_THROWS_AS (cmd_experiment ("nonsense", scratch ("x")), ConfigError);
}

TEST_CASE ("ramp pitch laws")
{
  auto const r = run_ramp_pitch ({});
  CHECK (r.k == doctest::Approx (0.4414414414).epsilon (1e-9));
  CHECK (r.fad_expected == doctest::Approx (1.5549469689).epsilon (1e-9));
  CHECK (r.tau_i == doctest::Approx (0.8003832565).epsilon (1e-9));
  CHECK (r.fad_ratio == doctest::Approx (r.fad_expected).epsilon (0.01));
  CHECK (r.fir_ratio == doctest::Approx (r.fir_expected).epsilon (0.01));
  CHECK (r.impulse_exit_s == doctest::Approx (r.tau_i).epsilon (0.01));
}

TEST_CASE ("benchmark CSV")
{
  BenchOptions opt;
  opt.ticks       = 20'000;
  opt.repetitions = 2;
  auto const res  = run_bench (std::vector<std::size_t> {1024, 4096}, opt);
  REQUIRE (res.size() == 2);
  for (auto const& r : res) {
    CHECK (r.fad_ns > 0.0);
    CHECK (r.fir_ns > 0.0);
    CHECK (r.fir_no_increment_ns > 0.0);
  }
  auto const p = fs::temp_directory_path() / "fadline_bench.csv";
  write_bench_csv (p, res);
  CHECK (first_line (p) == "buffer_size,fad_ns,fir_ns,fir_no_increment_ns,caching_cost_pct,repetitions");
  CHECK (line_count (p) == 3);
  fs::remove (p);
  CHECK_THROWS (run_bench (std::vector<std::size_t> {4096, 1024}, opt));
  CHECK_THROWS (run_bench (std::vector<std::size_t> {32}, opt));
}
