#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fadline {

using Sample = double;

class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

//------------------------------------------------------------------------------
// Fixed-capacity circular sample store. Every index is reduced modulo the
// capacity, so access never goes out of bounds.
class DelayBuffer {
public:
  static constexpr std::size_t min_capacity = 4;

  explicit DelayBuffer (std::size_t capacity);

  std::size_t size() const noexcept { return _cells.size(); }

  std::size_t wrap (std::ptrdiff_t idx) const noexcept
  {
    auto const n = static_cast<std::ptrdiff_t> (_cells.size());
    auto r       = idx % n;
    return static_cast<std::size_t> (r < 0 ? r + n : r);
  }

  Sample operator[] (std::ptrdiff_t idx) const noexcept
  {
    return _cells[wrap (idx)];
  }
  Sample& operator[] (std::ptrdiff_t idx) noexcept { return _cells[wrap (idx)]; }

  // unchecked access for callers that already hold a wrapped index
  Sample  at_wrapped (std::size_t i) const noexcept { return _cells[i]; }
  Sample& at_wrapped (std::size_t i) noexcept { return _cells[i]; }

  void clear() noexcept;

  std::span<Sample const> cells() const noexcept { return _cells; }

private:
  std::vector<Sample> _cells;
};

//------------------------------------------------------------------------------
// Fractional part of a delay, d in [-1, 1]. D = 1 - d is the delay of the
// quadratic interpolator measured from its first tap.
class FracOffset {
public:
  explicit FracOffset (double d);
  double value() const noexcept { return _d; }

private:
  double _d;
};

// Quadratic Lagrange interpolator, H(z) = h0 + h1 z^-1 + h2 z^-2.
struct Lagrange2 {
  double h0;
  double h1;
  double h2;

  double sum() const noexcept { return h0 + h1 + h2; }

  // y = h0 * x0 + h1 * x1 + h2 * x2 where x0 is the newest tap
  double apply (double x0, double x1, double x2) const noexcept
  {
    return h0 * x0 + h1 * x1 + h2 * x2;
  }
};

// Unchecked version for inner loops. Caller guarantees -1 <= d <= 1.
constexpr Lagrange2 lagrange2_coeffs_unchecked (double d) noexcept
{
  return {d * (1.0 + d) * 0.5, (1.0 + d) * (1.0 - d), -d * (1.0 - d) * 0.5};
}

Lagrange2 lagrange2_coeffs (FracOffset d);

struct FreqResponse {
  double magnitude;   // linear
  double phase_delay; // samples, total (nominal 1 - d plus excess)
};

FreqResponse lagrange2_response (FracOffset d, double freq_hz, double fs_hz);

// Deviation of the phase delay from the nominal 1 - d.
double lagrange2_excess_delay (FracOffset d, double freq_hz, double fs_hz);

struct DRange {
  double lo;
  double hi;
};

struct ResponseExtrema {
  double a_min;
  double a_max;
  double tau_min; // excess phase delay, samples
  double tau_max;
};

// Extrema over a dense grid of d (step 1/1024, both endpoints included).
ResponseExtrema response_extrema (double freq_hz, double fs_hz, DRange range);

} // namespace fadline
