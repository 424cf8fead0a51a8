#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace fadline {

struct BenchOptions {
  std::size_t ticks       = 10'000'000; // per repetition
  std::size_t repetitions = 14;
  bool        fast_floor  = false;
};

// Nanoseconds per sample, fastest of the repetitions.
struct BenchResult {
  std::size_t buffer_size;
  double      fad_ns;
  double      fir_ns;
  double      fir_no_increment_ns;
  std::size_t repetitions;

  // Share of the FIR time spent walking the buffer, in percent of the
  // pointer-free baseline.
  double caching_cost_pct() const
  {
    return 100.0 * (fir_ns - fir_no_increment_ns) / fir_no_increment_ns;
  }
};

// Sizes must be >= 64 and ascending. Runs single-threaded.
std::vector<BenchResult> run_bench (std::span<std::size_t const> buffer_sizes, BenchOptions const& opt = {});

void write_bench_csv (std::filesystem::path const& path, std::span<BenchResult const> rows);

std::vector<BenchResult> cmd_bench (
  std::span<std::size_t const> buffer_sizes,
  std::filesystem::path const& out_csv,
  BenchOptions const&          opt = {});

} // namespace fadline
