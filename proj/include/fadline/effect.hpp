#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "fadline/waveguide.hpp"

namespace fadline {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace mod {
struct None {};
// T(t) = start - rate * t for t < duration, then held
struct Ramp {
  double start_s;
  double rate; // seconds per second
  double duration_s;
};
// T(t) = base + depth * sin(2 pi rate t)
struct Sine {
  double depth_s;
  double rate_hz;
};
// a fresh random target in [base - depth, base + depth] every `interval`
// samples, linearly interpolated in between
struct RandomWalk {
  std::size_t interval = 100;
  double      depth_s;
};
} // namespace mod

using Modulation = std::variant<mod::None, mod::Ramp, mod::Sine, mod::RandomWalk>;

struct EffectConfig {
  LineKind      kind         = LineKind::fad;
  double        base_delay_s = 0.5;
  Modulation    modulation   = mod::None {};
  double        fs_hz        = 44100.0;
  std::size_t   buffer_size  = 0; // 0: smallest size that fits the run
  std::uint64_t seed         = 1;
};

// Delay in seconds for every output sample of an n-sample run.
std::vector<double> delay_trajectory (EffectConfig const& cfg, std::size_t n);

// Buffer size used for the run; throws ConfigError naming the first sample
// whose delay the line cannot realize.
std::size_t resolve_buffer_size (EffectConfig const& cfg, std::span<double const> delays_s);

// Streams `input` (plus a tail long enough to flush the longest delay)
// through the configured line.
std::vector<double> apply_effect (EffectConfig const& cfg, std::span<double const> input);

// WAV in, WAV out. Returns a process exit status.
int cmd_delay (
  std::filesystem::path const& in_wav,
  std::filesystem::path const& out_wav,
  EffectConfig                 cfg);

} // namespace fadline
