#pragma once

#include <array>
#include <cstddef>
#include <deque>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "fadline/fad_line.hpp"
#include "fadline/fir_line.hpp"

namespace fadline {

enum class LineKind { fir, fir_erase, fad };

LineKind         parse_line_kind (std::string_view name);
std::string_view to_string (LineKind kind);

struct StringTick {
  Sample left_end;  // wave arriving at the left termination
  Sample right_end; // wave arriving at the right termination
};

//------------------------------------------------------------------------------
// Ideal string: two delay lines in a loop, reflecting terminations at both
// ends. The reflected wave enters the opposite line on the next tick, so the
// round trip of a string of `length` samples takes 2 * length ticks and
// each line carries length - 1 samples of delay.
//
// FAD strings may start at an increment above 1 so the pitch can later be
// lowered by reducing it; the buffer then holds (length - 1) * increment
// cells, which must be an integer.
class WaveguideString {
public:
  WaveguideString (
    LineKind    kind,
    std::size_t length_samples,
    double      fs_hz,
    double      fad_increment   = 1.0,
    double      reflection_gain = -1.0);

  // Adds `cycles` periods of a sine into the right-going line at the left
  // termination, one sample per tick from now on.
  void inject_packet (std::size_t cycles, double freq_hz);

  // FIR kinds: new string length in samples (delay = length - 1).
  // FAD: new phase increment for both lines.
  void lower_pitch (double new_length_or_increment);

  StringTick tick();

  LineKind kind() const noexcept { return _kind; }
  double   fs() const noexcept { return _fs; }
  double   reflection_gain() const noexcept { return _gain; }
  double   line_delay() const; // samples, per direction
  std::size_t excitation_point() const noexcept { return 0; }

private:
  using Line = std::variant<FirLine, FadLine>;

  LineKind            _kind;
  double              _fs;
  double              _gain;
  std::size_t         _length;
  std::array<Line, 2> _lines; // right-going, left-going
  Sample              _out_right {0.0};
  Sample              _out_left {0.0};
  std::deque<Sample>  _pending;
};

// Rectified signal smoothed by an 8-sample moving average.
std::vector<double> packet_envelope (std::span<double const> x);

struct PacketEvent {
  std::size_t onset;    // envelope rises through the threshold
  std::size_t duration; // samples until it falls back below
};

// Packets whose envelope crosses `threshold` (absolute).
std::vector<PacketEvent> packet_events (std::span<double const> x, double threshold);

// Fundamental period in samples from the autocorrelation: the first lag in
// [min_lag, max_lag] whose normalized value reaches 90% of the maximum
// there and is a local peak.
std::size_t estimate_period (std::span<double const> x, std::size_t min_lag, std::size_t max_lag);

// Watches the left-termination output and fires on the tick a packet has
// fully passed (envelope fell back under the threshold).
class ReflectionDetector {
public:
  explicit ReflectionDetector (double threshold) : _threshold {threshold} {}
  bool push (Sample x);

private:
  double             _threshold;
  std::array<double, 8> _window {};
  std::size_t        _pos {0};
  double             _sum {0.0};
  bool               _inside {false};
};

struct PitchDropConfig {
  std::size_t length          = 801;   // samples, before the drop
  double      fad_increment   = 2.0;   // FAD start increment
  double      ratio           = 0.8;   // new pitch / old pitch
  double      packet_freq_div = 40.0;  // packet sine at fs / div
  std::size_t packet_cycles   = 3;
  std::size_t round_trips     = 6;     // observed on each side of the drop
  double      fs_hz           = 44100.0;
};

struct PitchDropReport {
  LineKind            kind;
  std::size_t         drop_tick;
  double              period_before;
  double              period_after;
  double              duration_before;
  double              duration_after;
  double              events_per_period_before;
  double              events_per_period_after;
  std::vector<double> waveform; // left-termination signal
  std::vector<PacketEvent> events;

  double period_ratio() const { return period_after / period_before; }
  double duration_ratio() const { return duration_after / duration_before; }
};

// Excites a string with a short sine packet, lowers the pitch right after a
// reflection at the left end, and measures period and packet width on both
// sides of the change.
PitchDropReport run_pitch_drop (LineKind kind, PitchDropConfig const& cfg = {});

} // namespace fadline
