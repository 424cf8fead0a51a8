#include "fadline/bench.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <limits>
#include <random>

#include "fadline/fad_line.hpp"
#include "fadline/fir_line.hpp"
#include "fadline/wav.hpp"

namespace fadline {

namespace {

constexpr std::size_t noise_len = 1 << 12;

volatile double g_sink = 0.0;

std::vector<double> make_noise()
{
  std::mt19937_64                        rng {12345};
  std::uniform_real_distribution<double> u {-1.0, 1.0};
  std::vector<double>                    v (noise_len);
  for (auto& x : v) {
    x = u (rng);
  }
  return v;
}

// Runs `ticks` samples of noise through a kernel; returns elapsed ns.
template <class Kernel>
double timed_run (Kernel& kernel, std::vector<double> const& noise, std::size_t ticks, double& sink)
{
  using clock   = std::chrono::steady_clock;
  auto const t0 = clock::now();
  double     acc = 0.0;
  for (std::size_t i = 0; i < ticks; ++i) {
    acc += kernel (noise[i & (noise_len - 1)]);
  }
  auto const t1 = clock::now();
  sink += acc;
  return std::chrono::duration<double, std::nano> (t1 - t0).count();
}

} // namespace

std::vector<BenchResult> run_bench (std::span<std::size_t const> sizes, BenchOptions const& opt)
{
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 64 || (i > 0 && sizes[i] <= sizes[i - 1])) {
      throw DomainError {"bench: buffer sizes must be >= 64 and strictly ascending"};
    }
  }
  if (opt.ticks == 0 || opt.repetitions == 0) {
    throw DomainError {"bench: ticks and repetitions must be positive"};
  }
  auto const               noise = make_noise();
  std::vector<BenchResult> rows;
  for (std::size_t b : sizes) {
    std::size_t const warmup = std::max<std::size_t> (2 * b, 100'000);
    double const      delay  = static_cast<double> (b) / 1.5;

    auto fad = FadLine::with_increment (b, static_cast<double> (b), 1.5);
    fad.set_floor_mode (opt.fast_floor ? FloorMode::magic : FloorMode::standard);
    FirLine fir {b, delay};
    FirLine fixed {b, delay};

    auto k_fad   = [&] (double x) { return fad.tick (x); };
    auto k_fir   = [&] (double x) { return fir.tick (x); };
    auto k_fixed = [&] (double x) { return fixed.tick_without_advance (x); };

    // one discarded run each loads code and data into the caches
    double sink = 0.0;
    timed_run (k_fad, noise, warmup, sink);
    timed_run (k_fir, noise, warmup, sink);
    timed_run (k_fixed, noise, warmup, sink);

    // repetitions are interleaved so all kernels see the same system noise
    double best[3] = {
      std::numeric_limits<double>::infinity(),
      std::numeric_limits<double>::infinity(),
      std::numeric_limits<double>::infinity()};
    for (std::size_t rep = 0; rep < opt.repetitions; ++rep) {
      best[0] = std::min (best[0], timed_run (k_fad, noise, opt.ticks, sink));
      best[1] = std::min (best[1], timed_run (k_fir, noise, opt.ticks, sink));
      best[2] = std::min (best[2], timed_run (k_fixed, noise, opt.ticks, sink));
    }
    g_sink = g_sink + sink;

    auto const  per = static_cast<double> (opt.ticks);
    BenchResult r {b, best[0] / per, best[1] / per, best[2] / per, opt.repetitions};
    rows.push_back (r);
  }
  return rows;
}

void write_bench_csv (std::filesystem::path const& path, std::span<BenchResult const> rows)
{
  std::ofstream os {path};
  if (!os) {
    throw IoError {"cannot create '" + path.string() + "'"};
  }
  os << "buffer_size,fad_ns,fir_ns,fir_no_increment_ns,caching_cost_pct,repetitions\n";
  for (auto const& r : rows) {
    os << r.buffer_size << ',' << r.fad_ns << ',' << r.fir_ns << ',' << r.fir_no_increment_ns
       << ',' << r.caching_cost_pct() << ',' << r.repetitions << '\n';
  }
}

std::vector<BenchResult> cmd_bench (
  std::span<std::size_t const> sizes,
  std::filesystem::path const& out_csv,
  BenchOptions const&          opt)
{
  auto rows = run_bench (sizes, opt);
  write_bench_csv (out_csv, rows);
  return rows;
}

} // namespace fadline
