#include "fadline/effect.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "fadline/fad_line.hpp"
#include "fadline/fir_line.hpp"
#include "fadline/wav.hpp"

namespace fadline {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

} // namespace

std::vector<double> delay_trajectory (EffectConfig const& cfg, std::size_t n)
{
  if (!(cfg.fs_hz > 0.0)) {
    throw ConfigError {"sample rate must be positive"};
  }
  std::vector<double> t (n, cfg.base_delay_s);
  double const        fs = cfg.fs_hz;

  std::visit (
    overloaded {
      [] (mod::None) {},
      [&] (mod::Ramp const& r) {
        for (std::size_t i = 0; i < n; ++i) {
          double const time = std::min (static_cast<double> (i) / fs, r.duration_s);
          t[i]              = r.start_s - r.rate * time;
        }
      },
      [&] (mod::Sine const& s) {
        for (std::size_t i = 0; i < n; ++i) {
          t[i] = cfg.base_delay_s
            + s.depth_s * std::sin (2.0 * std::numbers::pi * s.rate_hz * static_cast<double> (i) / fs);
        }
      },
      [&] (mod::RandomWalk const& w) {
        if (w.interval == 0) {
          throw ConfigError {"random walk interval must be positive"};
        }
        std::mt19937_64                        rng {cfg.seed};
        std::uniform_real_distribution<double> u {-1.0, 1.0};
        double from = cfg.base_delay_s;
        double to   = cfg.base_delay_s + w.depth_s * u (rng);
        for (std::size_t i = 0; i < n; ++i) {
          std::size_t const k = i % w.interval;
          if (k == 0 && i > 0) {
            from = to;
            to   = cfg.base_delay_s + w.depth_s * u (rng);
          }
          double const a = static_cast<double> (k) / static_cast<double> (w.interval);
          t[i]           = from + (to - from) * a;
        }
      }},
    cfg.modulation);
  return t;
}

std::size_t resolve_buffer_size (EffectConfig const& cfg, std::span<double const> delays_s)
{
  if (delays_s.empty()) {
    return std::max<std::size_t> (cfg.buffer_size, 8);
  }
  double const fs      = cfg.fs_hz;
  double const longest = *std::max_element (delays_s.begin(), delays_s.end()) * fs;

  auto const fail = [] (std::size_t i, std::string const& why) {
    return ConfigError {"sample " + std::to_string (i) + ": " + why};
  };

  if (cfg.kind == LineKind::fad) {
    std::size_t b = cfg.buffer_size;
    if (b == 0) {
      b = static_cast<std::size_t> (std::ceil (longest - 1e-9));
    }
    b = std::max<std::size_t> (b, 8);
    for (std::size_t i = 0; i < delays_s.size(); ++i) {
      double const samples = delays_s[i] * fs;
      double const inc     = static_cast<double> (b) / samples;
      if (!(inc >= 1.0 - 1e-12 && inc <= 2.0 + 1e-12)) {
        throw fail (i,
          "delay " + std::to_string (delays_s[i]) + " s needs increment "
          + std::to_string (inc) + " with buffer " + std::to_string (b)
          + "; the FAD line supports delays from B/2 to B samples");
      }
    }
    return b;
  }

  std::size_t cap = cfg.buffer_size;
  if (cap == 0) {
    cap = static_cast<std::size_t> (std::ceil (longest)) + 3;
  }
  cap = std::max<std::size_t> (cap, 8);
  for (std::size_t i = 0; i < delays_s.size(); ++i) {
    double const samples = delays_s[i] * fs;
    if (!(samples >= 2.0 && samples <= static_cast<double> (cap) - 2.0)) {
      throw fail (i,
        "delay " + std::to_string (samples) + " samples outside [2, "
        + std::to_string (cap - 2) + "]");
    }
  }
  return cap;
}

std::vector<double> apply_effect (EffectConfig const& cfg, std::span<double const> input)
{
  // the tail must cover the longest delay the run reaches
  auto const probe   = delay_trajectory (cfg, input.size() + 1);
  double const longest = *std::max_element (probe.begin(), probe.end()) * cfg.fs_hz;
  std::size_t const total = input.size() + static_cast<std::size_t> (std::ceil (longest)) + 2;

  auto const        delays = delay_trajectory (cfg, total);
  std::size_t const size   = resolve_buffer_size (cfg, delays);
  std::vector<double> out (total);

  auto run = [&] (auto& line, auto&& set) {
    double current = -1.0;
    for (std::size_t i = 0; i < total; ++i) {
      if (delays[i] != current) {
        current = delays[i];
        set (line, current);
      }
      out[i] = line.tick (i < input.size() ? input[i] : 0.0);
    }
  };

  if (cfg.kind == LineKind::fad) {
    FadLine line {size, cfg.fs_hz, delays.front()};
    run (line, [] (FadLine& l, double t) { l.set_delay (t); });
  }
  else {
    FirLine line {size, delays.front() * cfg.fs_hz, cfg.kind == LineKind::fir_erase};
    run (line, [&] (FirLine& l, double t) { l.set_delay (t * cfg.fs_hz); });
  }
  return out;
}

int cmd_delay (
  std::filesystem::path const& in_wav,
  std::filesystem::path const& out_wav,
  EffectConfig                 cfg)
{
  auto const wav = read_wav (in_wav);
  cfg.fs_hz      = static_cast<double> (wav.sample_rate);
  auto const out = apply_effect (cfg, wav.samples);
  write_wav (out_wav, wav.sample_rate, out);
  return 0;
}

} // namespace fadline
