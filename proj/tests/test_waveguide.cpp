#include <doctest.h>

#include <cmath>
#include <vector>

#include "fadline/waveguide.hpp"

using namespace fadline;

namespace {

std::vector<double> run_string (WaveguideString& s, std::size_t ticks)
{
  std::vector<double> left;
  left.reserve (ticks);
  for (std::size_t n = 0; n < ticks; ++n) {
    left.push_back (s.tick().left_end);
  }
  return left;
}

} // namespace

TEST_CASE ("line kind names")
{
  CHECK (parse_line_kind ("fir") == LineKind::fir);
  CHECK (parse_line_kind ("fir-erase") == LineKind::fir_erase);
  CHECK (parse_line_kind ("fad") == LineKind::fad);
  CHECK (to_string (LineKind::fir_erase) == "fir-erase");
  CHECK_THROWS (parse_line_kind ("farrow"));
}

TEST_CASE ("a packet recirculates with period 2 * length")
{
  for (auto kind : {LineKind::fir, LineKind::fir_erase, LineKind::fad}) {
    CAPTURE (to_string (kind));
    WaveguideString s {kind, 200, 44100.0};
    s.inject_packet (2, 44100.0 / 20.0);
    auto const x = run_string (s, 4000);
    CHECK (estimate_period (x, 100, 1000) == 400);
    auto const ev = packet_events (x, 0.1);
    REQUIRE (ev.size() >= 8);
    for (std::size_t i = 1; i < ev.size(); ++i) {
      CHECK (ev[i].onset - ev[i - 1].onset == 400);
    }
  }
}

TEST_CASE ("FAD at increment 1 equals FIR")
{
  WaveguideString a {LineKind::fir, 150, 44100.0}, b {LineKind::fad, 150, 44100.0, 1.0};
  a.inject_packet (3, 44100.0 / 25.0);
  b.inject_packet (3, 44100.0 / 25.0);
  for (int n = 0; n < 5000; ++n) {
    auto const ta = a.tick(), tb = b.tick();
    REQUIRE (ta.left_end == tb.left_end);
    REQUIRE (ta.right_end == tb.right_end);
  }
}

TEST_CASE ("ideal terminations are lossless")
{
  WaveguideString s {LineKind::fad, 100, 44100.0, 1.0};
  s.inject_packet (2, 44100.0 / 20.0);
  auto const x = run_string (s, 200 * 40);
  // energy per round trip
  auto energy = [&] (std::size_t trip) {
    double e = 0.0;
    for (std::size_t n = trip * 200; n < (trip + 1) * 200; ++n) {
      e += x[n] * x[n];
    }
    return e;
  };
  double const first = energy (1);
  REQUIRE (first > 0.0);
  for (std::size_t k = 2; k < 40; ++k) {
    CHECK (energy (k) == doctest::Approx (first).epsilon (1e-12));
  }
}

TEST_CASE ("construction limits")
{
  CHECK_THROWS (WaveguideString (LineKind::fir, 8, 44100.0));
  CHECK_NOTHROW (WaveguideString (LineKind::fad, 101, 44100.0, 1.25));
  CHECK_THROWS (WaveguideString (LineKind::fad, 102, 44100.0, 1.25)); // 126.25 cells
  WaveguideString s {LineKind::fir, 32, 44100.0};
  CHECK_THROWS (s.inject_packet (100, 1000.0));
}

TEST_CASE ("reflection detector fires after a packet")
{
  ReflectionDetector d {0.1};
  int                fired = 0;
  for (int n = 0; n < 100; ++n) {
    double const x = (n >= 10 && n < 30) ? 1.0 : 0.0;
    fired += d.push (x) ? 1 : 0;
  }
  CHECK (fired == 1);
}

TEST_CASE ("pitch drop")
{
  auto const fad = run_pitch_drop (LineKind::fad);
  CHECK (fad.period_ratio() == doctest::Approx (1.25).epsilon (0.01));
  CHECK (fad.duration_ratio() == doctest::Approx (fad.period_ratio()).epsilon (0.02));
  CHECK (fad.events_per_period_after == doctest::Approx (1.0));

  auto const fir = run_pitch_drop (LineKind::fir);
  CHECK (fir.period_ratio() == doctest::Approx (1.25).epsilon (0.01));
  CHECK (fir.duration_ratio() == doctest::Approx (1.0).epsilon (0.02));
  CHECK (fir.events_per_period_after > 1.5);

  auto const erase = run_pitch_drop (LineKind::fir_erase);
  CHECK (erase.events_per_period_after == doctest::Approx (1.0));
}
