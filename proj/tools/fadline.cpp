// fadline: delay effects, experiment datasets and the throughput benchmark.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fadline/bench.hpp"
#include "fadline/effect.hpp"
#include "fadline/experiments.hpp"
#include "fadline/wav.hpp"

namespace {

fadline::Modulation make_modulation (
  std::string const& name,
  double             base,
  double             depth,
  double             rate_hz,
  double             ramp_start,
  double             ramp_rate,
  double             ramp_duration,
  std::size_t        walk_interval)
{
  using namespace fadline;
  if (name == "none") {
    return mod::None {};
  }
  if (name == "ramp") {
    return mod::Ramp {ramp_start > 0.0 ? ramp_start : base, ramp_rate, ramp_duration};
  }
  if (name == "sine") {
    return mod::Sine {depth, rate_hz};
  }
  if (name == "walk") {
    return mod::RandomWalk {walk_interval, depth};
  }
  throw ConfigError {"unknown modulation '" + name + "'"};
}

std::vector<std::size_t> default_sizes()
{
  std::vector<std::size_t> s;
  for (int e = 10; e <= 22; ++e) {
    s.push_back (std::size_t {1} << e);
  }
  return s;
}

} // namespace

int main (int argc, char** argv)
{
  CLI::App app {"Fractionally-addressed and FIR delay lines"};
  app.require_subcommand (1);

  double        fs     = 44100.0;
  std::size_t   buffer = 0;
  std::uint64_t seed   = 1;
  std::string   out;

  // delay
  auto*       delay_cmd = app.add_subcommand ("delay", "process a 16-bit mono WAV through a delay line");
  std::string in_wav, out_wav;
  std::string line_name = "fad";
  std::string mod_name  = "none";
  double      delay_s = 0.5, depth_s = 0.002, rate_hz = 1.0;
  double      ramp_start = 0.0, ramp_rate = 0.0, ramp_duration = 1.0;
  std::size_t walk_interval = 100;
  delay_cmd->add_option ("input", in_wav, "input WAV")->required()->check (CLI::ExistingFile);
  delay_cmd->add_option ("output", out_wav, "output WAV");
  delay_cmd->add_option ("--out", out_wav, "output WAV");
  delay_cmd->add_option ("--line", line_name, "line kind")->check (CLI::IsMember ({"fir", "fir-erase", "fad"}));
  delay_cmd->add_option ("--delay-s", delay_s, "base delay in seconds");
  delay_cmd->add_option ("--mod", mod_name, "delay modulation")->check (CLI::IsMember ({"none", "ramp", "sine", "walk"}));
  delay_cmd->add_option ("--depth-s", depth_s, "sine/walk modulation depth in seconds");
  delay_cmd->add_option ("--rate-hz", rate_hz, "sine modulation rate");
  delay_cmd->add_option ("--ramp-start-s", ramp_start, "ramp start delay (defaults to --delay-s)");
  delay_cmd->add_option ("--ramp-rate", ramp_rate, "ramp slope k in seconds per second");
  delay_cmd->add_option ("--ramp-duration-s", ramp_duration, "ramp length in seconds");
  delay_cmd->add_option ("--walk-interval", walk_interval, "samples between random targets");
  delay_cmd->add_option ("--buffer", buffer, "buffer size in samples (0: fit the run)");
  delay_cmd->add_option ("--seed", seed, "random seed");

  // experiment
  auto*       exp_cmd = app.add_subcommand ("experiment", "regenerate an analysis dataset as CSV");
  std::string exp_name;
  std::string out_dir = "out";
  double      increment = 1.5;
  std::size_t exp_buffer = 44100;
  exp_cmd->add_option ("name", exp_name, "experiment")
    ->required()
    ->check (CLI::IsMember ({"snr", "attenuation", "sidebands", "dither_sonogram", "ramp_pitch", "waveguide"}));
  exp_cmd->add_option ("--out", out_dir, "output directory");
  exp_cmd->add_option ("--fs", fs, "sample rate");
  exp_cmd->add_option ("--buffer", exp_buffer, "FAD buffer size");
  exp_cmd->add_option ("--increment", increment, "FAD increment");
  exp_cmd->add_option ("--seed", seed, "random seed");

  // bench
  auto*                    bench_cmd = app.add_subcommand ("bench", "time FAD, FIR and FIR without pointer increment");
  std::vector<std::size_t> sizes     = default_sizes();
  std::string              bench_out = "bench.csv";
  fadline::BenchOptions    bopt;
  bench_cmd->add_option ("--sizes", sizes, "ascending buffer sizes")->delimiter (',');
  bench_cmd->add_option ("--out", bench_out, "output CSV");
  bench_cmd->add_option ("--ticks", bopt.ticks, "samples per repetition");
  bench_cmd->add_option ("--repetitions", bopt.repetitions, "repetitions, fastest is kept");
  bench_cmd->add_flag ("--fast-floor", bopt.fast_floor, "bit-trick float-to-int in the FAD line");

  CLI11_PARSE (app, argc, argv);

  try {
    if (*delay_cmd) {
      if (out_wav.empty()) {
        throw fadline::ConfigError {"no output file given"};
      }
      fadline::EffectConfig cfg;
      cfg.kind         = fadline::parse_line_kind (line_name);
      cfg.base_delay_s = delay_s;
      cfg.modulation   = make_modulation (
        mod_name, delay_s, depth_s, rate_hz, ramp_start, ramp_rate, ramp_duration, walk_interval);
      cfg.buffer_size = buffer;
      cfg.seed        = seed;
      return fadline::cmd_delay (in_wav, out_wav, cfg);
    }
    if (*exp_cmd) {
      fadline::ExperimentParams p;
      p.fs_hz       = fs;
      p.buffer_size = exp_buffer;
      p.increment   = increment;
      p.seed        = seed;
      for (auto const& f : fadline::cmd_experiment (exp_name, out_dir, p)) {
        std::cout << f.string() << '\n';
      }
      return 0;
    }
    if (*bench_cmd) {
      auto const rows = fadline::cmd_bench (sizes, bench_out, bopt);
      std::printf ("%10s %10s %10s %12s %10s\n", "size", "fad_ns", "fir_ns", "fir_noinc_ns", "cache_%");
      for (auto const& r : rows) {
        std::printf (
          "%10zu %10.3f %10.3f %12.3f %10.2f\n",
          r.buffer_size, r.fad_ns, r.fir_ns, r.fir_no_increment_ns, r.caching_cost_pct());
      }
      return 0;
    }
  }
  catch (fadline::IoError const& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 3;
  }
  catch (fadline::ConfigError const& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  catch (fadline::DomainError const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
