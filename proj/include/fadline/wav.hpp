#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

namespace fadline {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct WavData {
  std::uint32_t       sample_rate;
  std::vector<double> samples; // int16 / 32768
};

// 16-bit PCM mono only; anything else is rejected with a description of
// what was found.
WavData read_wav (std::filesystem::path const& path);

// Saturating conversion to 16-bit PCM mono.
void write_wav (std::filesystem::path const& path, std::uint32_t sample_rate, std::span<double const> samples);

std::int16_t to_pcm16 (double x) noexcept;

} // namespace fadline
