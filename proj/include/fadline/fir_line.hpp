#pragma once

#include <cmath>
#include <cstdint>

#include "fadline/core.hpp"

namespace fadline {

//------------------------------------------------------------------------------
// Two-pointer variable delay: a write pointer followed by a quadratically
// interpolated read pointer on a circular buffer.
//
// The delay is split as M = round(delay), d = M - delay in [-0.5, 0.5] and
// read from the cells {r-1, r, r+1} with r = write - M. Within a tick the
// input is written first, then the read happens, so delays down to 2 samples
// are realizable. Valid delays are [2, B-2].
//
// With erase_after_read every cell the read window has left behind is zeroed,
// so lengthening the delay re-exposes silence instead of old waveform.
class FirLine {
public:
  FirLine (std::size_t capacity, double initial_delay, bool erase_after_read = false);

  void set_delay (double delay);
  double delay() const noexcept { return _delay; }
  double nominal_delay() const noexcept { return _delay; }
  bool erase_after_read() const noexcept { return _erase; }
  std::size_t capacity() const noexcept { return _buf.size(); }
  std::size_t write_index() const noexcept { return _write; }
  DelayBuffer const& buffer() const noexcept { return _buf; }

  void reset() noexcept;

  Sample tick (Sample in) noexcept { return process<true> (in); }

  // Benchmark baseline: identical arithmetic but the pointers never move,
  // so every access hits the same handful of cells.
  Sample tick_without_advance (Sample in) noexcept { return process<false> (in); }

private:
  template <bool Advance>
  Sample process (Sample in) noexcept
  {
    std::size_t const n = _buf.size();
    _buf.at_wrapped (_write) = in;
    // delay >= 2, so adding 0.5 and truncating rounds to nearest
    auto const   m = static_cast<std::size_t> (_delay + 0.5);
    double const d = static_cast<double> (m) - _delay;
    auto const   h = lagrange2_coeffs_unchecked (d);

    std::size_t const r   = _write >= m ? _write - m : _write + n - m;
    std::size_t const rm1 = r == 0 ? n - 1 : r - 1;
    std::size_t const rp1 = r + 1 == n ? 0 : r + 1;
    Sample const out = h.apply (_buf.at_wrapped (rp1), _buf.at_wrapped (r), _buf.at_wrapped (rm1));
    if (_erase) {
      erase_behind (_now - static_cast<std::int64_t> (m) - 1);
    }
    if constexpr (Advance) {
      ++_now;
      if (++_write == n) {
        _write = 0;
      }
    }
    return out;
  }

  void erase_behind (std::int64_t first_needed) noexcept;

  DelayBuffer  _buf;
  double       _delay;
  std::size_t  _write {0};
  std::int64_t _now {0};
  std::int64_t _erased_upto {0};
  bool         _erase;
  bool         _erase_started {false};
};

} // namespace fadline
