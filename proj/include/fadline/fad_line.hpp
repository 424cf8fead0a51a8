#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>

#include "fadline/core.hpp"

namespace fadline {

// Floor of a non-negative double. The "magic" variant rounds through the
// FPU by adding 1.5 * 2^52 and corrects the result, avoiding a slow
// float-to-int conversion on some targets.
enum class FloorMode { standard, magic };

inline std::int64_t floor_nonneg (double x, FloorMode mode) noexcept
{
  if (mode == FloorMode::standard) {
    return static_cast<std::int64_t> (x);
  }
  constexpr double magic = 6755399441055744.0; // 1.5 * 2^52
  double const     r     = (x + magic) - magic; // round to nearest
  auto             i     = static_cast<std::int64_t> (r);
  return r > x ? i - 1 : i;
}

// Instrumentation hook for the pointer's buffer accesses. The default does
// nothing and compiles away.
struct NoProbe {
  void on_write (std::size_t) noexcept {}
};

//------------------------------------------------------------------------------
// Fractionally-Addressed Delay line.
//
// A single fractional pointer sweeps a B-cell buffer at `increment` cells per
// tick. Each tick it first reads, interpolating over the cells at and ahead
// of the pointer, and then fills every cell between the previous and the
// current pointer position with a value interpolated from the recent input
// stream. The delay is B / increment samples, B / (increment * fs) seconds.
//
// Both interpolators are quadratic Lagrange. The input taps (x[n], x[n-1],
// x[n-2]) sit at buffer positions (p, p - s, p - 2s), s being the last
// pointer step, so a cell at distance delta behind the pointer is written
// with fractional delay delta / s. With increment 1 and zero initial phase
// both interpolators reduce to copies and the line is an exact delay.
template <class Probe = NoProbe>
class BasicFadLine {
public:
  static constexpr double min_increment = 1.0;
  static constexpr double max_increment = 2.0;

  // delay given in seconds, increment = B / (T * fs)
  BasicFadLine (std::size_t buffer_size, double fs_hz, double delay_s)
    : BasicFadLine {buffer_size, fs_hz, increment_for (buffer_size, fs_hz, delay_s), 0}
  {}

  static BasicFadLine with_increment (std::size_t buffer_size, double fs_hz, double increment)
  {
    return BasicFadLine {buffer_size, fs_hz, increment, 0};
  }

  static double increment_for (std::size_t buffer_size, double fs_hz, double delay_s)
  {
    if (!(fs_hz > 0.0) || !(delay_s > 0.0)) {
      throw DomainError {"FadLine: sample rate and delay must be positive"};
    }
    return snap (static_cast<double> (buffer_size) / (delay_s * fs_hz));
  }

  void set_delay (double delay_s)
  {
    set_increment (increment_for (_buf.size(), _fs, delay_s));
  }

  void set_increment (double increment)
  {
    increment = snap (increment);
    check_increment (increment);
    _increment = increment;
  }

  // Restarts the line: zeroed buffer and input history, pointer at `phase`.
  void reset (double initial_phase = 0.0)
  {
    if (!(initial_phase >= 0.0 && initial_phase < static_cast<double> (_buf.size()))) {
      throw DomainError {"FadLine: initial phase outside [0, B)"};
    }
    _buf.clear();
    _phase     = initial_phase;
    auto fph   = static_cast<std::size_t> (initial_phase);
    _phase_old = fph == 0 ? _buf.size() - 1 : fph - 1;
    _last_step = _increment;
    _x1 = _x2 = 0.0;
  }

  void set_floor_mode (FloorMode m) noexcept { _floor_mode = m; }

  Sample tick (Sample in) noexcept
  {
    auto const   fph  = static_cast<std::size_t> (floor_nonneg (_phase, _floor_mode));
    double const frac = _phase - static_cast<double> (fph);

    // read at and ahead of the pointer
    auto const   hr  = lagrange2_coeffs_unchecked (1.0 - frac);
    Sample const out = hr.apply (cell (fph), cell (fph + 1), cell (fph + 2));

    // fill (phase_old, fph] from the input stream behind the pointer
    std::size_t const n     = _buf.size();
    std::size_t const count = fph > _phase_old ? fph - _phase_old : fph + n - _phase_old;
    double const      inv_s = 1.0 / _last_step;
    std::size_t       ph    = _phase_old + 1;
    if (ph == n) {
      ph = 0;
    }
    for (std::size_t j = 0; j < count; ++j) {
      double const delta = frac + static_cast<double> (count - 1 - j);
      auto const   hw    = lagrange2_coeffs_unchecked (1.0 - delta * inv_s);
      _buf.at_wrapped (ph) = hw.apply (in, _x1, _x2);
      _probe.on_write (ph);
      if (++ph == n) {
        ph = 0;
      }
    }

    _x2        = _x1;
    _x1        = in;
    _phase_old = fph;
    _last_step = _increment;
    _phase += _increment;
    if (_phase >= static_cast<double> (n)) {
      _phase -= static_cast<double> (n);
    }
    return out;
  }

  double increment() const noexcept { return _increment; }
  double phase() const noexcept { return _phase; }
  double fs() const noexcept { return _fs; }
  std::size_t buffer_size() const noexcept { return _buf.size(); }
  double delay_seconds() const noexcept { return nominal_delay() / _fs; }
  double nominal_delay() const noexcept
  {
    return static_cast<double> (_buf.size()) / _increment;
  }
  DelayBuffer const& buffer() const noexcept { return _buf; }
  Probe&             probe() noexcept { return _probe; }
  Probe const&       probe() const noexcept { return _probe; }

private:
  BasicFadLine (std::size_t buffer_size, double fs_hz, double increment, int)
    : _buf {std::max<std::size_t> (buffer_size, DelayBuffer::min_capacity)}
    , _fs {fs_hz}
  {
    if (buffer_size < 8) {
      throw DomainError {"FadLine: buffer size must be at least 8"};
    }
    if (!(fs_hz > 0.0)) {
      throw DomainError {"FadLine: sample rate must be positive"};
    }
    increment = snap (increment);
    check_increment (increment);
    _increment = increment;
    reset (0.0);
  }

  // Absorbs rounding noise from B / (T * fs) at the range ends.
  static double snap (double inc) noexcept
  {
    constexpr double eps = 1e-12;
    if (std::abs (inc - min_increment) < eps) {
      return min_increment;
    }
    if (std::abs (inc - max_increment) < eps) {
      return max_increment;
    }
    return inc;
  }

  static void check_increment (double inc)
  {
    if (!(inc >= min_increment && inc <= max_increment)) {
      throw DomainError {
        "FadLine: increment " + std::to_string (inc) + " outside [1, 2]"};
    }
  }

  Sample cell (std::size_t i) const noexcept
  {
    std::size_t const n = _buf.size();
    return _buf.at_wrapped (i >= n ? i - n : i);
  }

  DelayBuffer _buf;
  double      _fs;
  double      _increment {1.0};
  double      _phase {0.0};
  std::size_t _phase_old {0};
  double      _last_step {1.0};
  Sample      _x1 {0.0};
  Sample      _x2 {0.0};
  FloorMode   _floor_mode {FloorMode::standard};
  Probe       _probe {};
};

using FadLine = BasicFadLine<>;

} // namespace fadline
