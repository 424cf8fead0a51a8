#include "fadline/waveguide.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fadline {

LineKind parse_line_kind (std::string_view name)
{
  if (name == "fir") {
    return LineKind::fir;
  }
  if (name == "fir-erase") {
    return LineKind::fir_erase;
  }
  if (name == "fad") {
    return LineKind::fad;
  }
  throw DomainError {"unknown line kind '" + std::string {name} + "'"};
}

std::string_view to_string (LineKind kind)
{
  switch (kind) {
  case LineKind::fir: return "fir";
  case LineKind::fir_erase: return "fir-erase";
  case LineKind::fad: return "fad";
  }
  return "?";
}

namespace {

constexpr std::size_t fir_headroom = 4;

auto make_line (LineKind kind, std::size_t length, double fs, double increment)
  -> std::variant<FirLine, FadLine>
{
  double const delay = static_cast<double> (length - 1);
  if (kind == LineKind::fad) {
    double const cells = delay * increment;
    auto const   b     = static_cast<std::size_t> (std::llround (cells));
    if (std::abs (cells - static_cast<double> (b)) > 1e-9) {
      throw DomainError {"WaveguideString: (length - 1) * increment must be an integer"};
    }
    return FadLine::with_increment (b, fs, increment);
  }
  return FirLine {fir_headroom * length + 4, delay, kind == LineKind::fir_erase};
}

} // namespace

WaveguideString::WaveguideString (
  LineKind    kind,
  std::size_t length_samples,
  double      fs_hz,
  double      fad_increment,
  double      reflection_gain)
  : _kind {kind}
  , _fs {fs_hz}
  , _gain {reflection_gain}
  , _length {length_samples}
  , _lines {
      (length_samples >= 16 ? make_line (kind, length_samples, fs_hz, fad_increment)
                            : throw DomainError {"WaveguideString: length must be at least 16"}),
      make_line (kind, length_samples, fs_hz, fad_increment)}
{
  if (!(std::abs (reflection_gain) <= 1.0)) {
    throw DomainError {"WaveguideString: |reflection gain| must not exceed 1"};
  }
}

double WaveguideString::line_delay() const
{
  return std::visit ([] (auto const& l) { return l.nominal_delay(); }, _lines[0]);
}

void WaveguideString::inject_packet (std::size_t cycles, double freq_hz)
{
  if (!(freq_hz > 0.0 && freq_hz < _fs * 0.5)) {
    throw DomainError {"inject_packet: frequency must lie in (0, fs/2)"};
  }
  auto const n = static_cast<std::size_t> (
    std::llround (static_cast<double> (cycles) * _fs / freq_hz));
  if (n == 0 || static_cast<double> (n) >= line_delay()) {
    throw DomainError {"inject_packet: packet does not fit in the line"};
  }
  if (_pending.size() < n) {
    _pending.resize (n, 0.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    _pending[i] += std::sin (2.0 * std::numbers::pi * freq_hz * static_cast<double> (i) / _fs);
  }
}

void WaveguideString::lower_pitch (double value)
{
  if (_kind == LineKind::fad) {
    for (auto& l : _lines) {
      std::get<FadLine> (l).set_increment (value);
    }
    return;
  }
  if (!(value >= 16.0)) {
    throw DomainError {"lower_pitch: string length must be at least 16"};
  }
  // validate both before touching either
  double const delay = value - 1.0;
  for (auto& l : _lines) {
    auto const& f = std::get<FirLine> (l);
    if (!(delay >= 2.0 && delay <= static_cast<double> (f.capacity()) - 2.0)) {
      throw DomainError {"lower_pitch: length " + std::to_string (value) + " exceeds the line capacity"};
    }
  }
  for (auto& l : _lines) {
    std::get<FirLine> (l).set_delay (delay);
  }
  _length = static_cast<std::size_t> (std::llround (value));
}

StringTick WaveguideString::tick()
{
  Sample excitation = 0.0;
  if (!_pending.empty()) {
    excitation = _pending.front();
    _pending.pop_front();
  }
  Sample const in_right = _gain * _out_left + excitation;
  Sample const in_left  = _gain * _out_right;
  _out_right = std::visit ([&] (auto& l) { return l.tick (in_right); }, _lines[0]);
  _out_left  = std::visit ([&] (auto& l) { return l.tick (in_left); }, _lines[1]);
  return {_out_left, _out_right};
}

std::vector<double> packet_envelope (std::span<double const> x)
{
  constexpr std::size_t span = 8;
  std::vector<double>   env (x.size());
  double                acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += std::abs (x[i]);
    if (i >= span) {
      acc -= std::abs (x[i - span]);
    }
    env[i] = acc / static_cast<double> (span);
  }
  return env;
}

std::vector<PacketEvent> packet_events (std::span<double const> x, double threshold)
{
  auto const               env = packet_envelope (x);
  std::vector<PacketEvent> events;
  bool                     inside = false;
  std::size_t              onset  = 0;
  for (std::size_t i = 0; i < env.size(); ++i) {
    bool const above = env[i] > threshold;
    if (above && !inside) {
      onset = i;
    }
    else if (!above && inside) {
      events.push_back ({onset, i - onset});
    }
    inside = above;
  }
  return events;
}

std::size_t estimate_period (std::span<double const> x, std::size_t min_lag, std::size_t max_lag)
{
  if (min_lag == 0 || min_lag > max_lag || max_lag + 1 >= x.size()) {
    throw DomainError {"estimate_period: lag range does not fit the signal"};
  }
  std::vector<double> r (max_lag + 2, 0.0);
  for (std::size_t lag = min_lag; lag <= max_lag + 1; ++lag) {
    double xy = 0.0, xx = 0.0, yy = 0.0;
    for (std::size_t n = 0; n + lag < x.size(); ++n) {
      xy += x[n] * x[n + lag];
      xx += x[n] * x[n];
      yy += x[n + lag] * x[n + lag];
    }
    r[lag] = xx > 0.0 && yy > 0.0 ? xy / std::sqrt (xx * yy) : 0.0;
  }
  double const best = *std::max_element (r.begin() + static_cast<std::ptrdiff_t> (min_lag), r.begin() + static_cast<std::ptrdiff_t> (max_lag) + 1);
  for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
    bool const peak = r[lag] >= r[lag - 1] && r[lag] >= r[lag + 1];
    if (r[lag] >= 0.9 * best && peak) {
      return lag;
    }
  }
  return static_cast<std::size_t> (
    std::max_element (r.begin() + static_cast<std::ptrdiff_t> (min_lag), r.begin() + static_cast<std::ptrdiff_t> (max_lag) + 1)
    - r.begin());
}

bool ReflectionDetector::push (Sample x)
{
  _sum += std::abs (x) - _window[_pos];
  _window[_pos] = std::abs (x);
  _pos          = (_pos + 1) % _window.size();
  bool const above = _sum / static_cast<double> (_window.size()) > _threshold;
  bool const fired = _inside && !above;
  _inside          = above;
  return fired;
}

namespace {

struct SegmentStats {
  double period;
  double duration;
  double events_per_period;
};

SegmentStats analyze_segment (
  std::span<double const> seg,
  double                  expected_period,
  double                  threshold)
{
  auto const min_lag = static_cast<std::size_t> (0.6 * expected_period);
  auto const max_lag = static_cast<std::size_t> (1.4 * expected_period);
  auto const period  = static_cast<double> (estimate_period (seg, min_lag, max_lag));

  auto events = packet_events (seg, threshold);
  // drop packets cut by the segment edges
  std::erase_if (events, [&] (PacketEvent const& e) {
    return e.onset == 0 || e.onset + e.duration + 1 >= seg.size();
  });
  std::vector<double> d;
  for (auto const& e : events) {
    d.push_back (static_cast<double> (e.duration));
  }
  double median = 0.0;
  if (!d.empty()) {
    auto mid = d.begin() + static_cast<std::ptrdiff_t> (d.size() / 2);
    std::nth_element (d.begin(), mid, d.end());
    median = *mid;
  }
  double const periods = static_cast<double> (seg.size()) / period;
  return {period, median, static_cast<double> (events.size()) / std::floor (periods)};
}

} // namespace

PitchDropReport run_pitch_drop (LineKind kind, PitchDropConfig const& cfg)
{
  double const inc0 = kind == LineKind::fad ? cfg.fad_increment : 1.0;
  WaveguideString s {kind, cfg.length, cfg.fs_hz, inc0};
  s.inject_packet (cfg.packet_cycles, cfg.fs_hz / cfg.packet_freq_div);

  double const period0 = 2.0 * static_cast<double> (cfg.length);
  double const period1 = period0 / cfg.ratio;
  auto const   warmup  = static_cast<std::size_t> (period0 * static_cast<double> (cfg.round_trips));

  PitchDropReport rep {};
  rep.kind = kind;
  ReflectionDetector detector {0.1};
  bool               dropped = false;
  std::size_t const  total
    = warmup + 2 * static_cast<std::size_t> (period0) + static_cast<std::size_t> (period1 * static_cast<double> (cfg.round_trips + 1));

  for (std::size_t n = 0; n < total; ++n) {
    auto const out = s.tick();
    rep.waveform.push_back (out.left_end);
    bool const passed = detector.push (out.left_end);
    if (!dropped && n >= warmup && passed) {
      if (kind == LineKind::fad) {
        s.lower_pitch (inc0 * cfg.ratio);
      }
      else {
        s.lower_pitch (std::round (static_cast<double> (cfg.length) / cfg.ratio));
      }
      rep.drop_tick = n;
      dropped       = true;
    }
  }
  if (!dropped) {
    throw DomainError {"run_pitch_drop: no reflection detected at the left end"};
  }

  std::span<double const> const all {rep.waveform};
  auto const before_begin = static_cast<std::size_t> (period0); // skip the excitation pass
  auto const before = all.subspan (before_begin, rep.drop_tick - before_begin);
  auto const after_begin = rep.drop_tick + static_cast<std::size_t> (period1);
  auto const after       = all.subspan (after_begin);

  double peak = 0.0;
  for (double e : packet_envelope (before)) {
    peak = std::max (peak, e);
  }
  double const threshold = 0.1 * peak;

  auto const b = analyze_segment (before, period0, threshold);
  auto const a = analyze_segment (after, period1, threshold);
  rep.period_before            = b.period;
  rep.duration_before          = b.duration;
  rep.events_per_period_before = b.events_per_period;
  rep.period_after             = a.period;
  rep.duration_after           = a.duration;
  rep.events_per_period_after  = a.events_per_period;
  rep.events                   = packet_events (all, threshold);
  return rep;
}

} // namespace fadline
