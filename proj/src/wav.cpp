#include "fadline/wav.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

namespace fadline {

namespace {

std::uint32_t le32 (unsigned char const* p)
{
  return static_cast<std::uint32_t> (p[0]) | (static_cast<std::uint32_t> (p[1]) << 8)
    | (static_cast<std::uint32_t> (p[2]) << 16) | (static_cast<std::uint32_t> (p[3]) << 24);
}

std::uint16_t le16 (unsigned char const* p)
{
  return static_cast<std::uint16_t> (p[0] | (p[1] << 8));
}

void put32 (std::ofstream& os, std::uint32_t v)
{
  std::array<char, 4> b {
    static_cast<char> (v & 0xff),
    static_cast<char> ((v >> 8) & 0xff),
    static_cast<char> ((v >> 16) & 0xff),
    static_cast<char> ((v >> 24) & 0xff)};
  os.write (b.data(), 4);
}

void put16 (std::ofstream& os, std::uint16_t v)
{
  std::array<char, 2> b {static_cast<char> (v & 0xff), static_cast<char> ((v >> 8) & 0xff)};
  os.write (b.data(), 2);
}

} // namespace

std::int16_t to_pcm16 (double x) noexcept
{
  double const v = std::round (x * 32768.0);
  return static_cast<std::int16_t> (std::clamp (v, -32768.0, 32767.0));
}

WavData read_wav (std::filesystem::path const& path)
{
  std::ifstream is {path, std::ios::binary};
  if (!is) {
    throw IoError {"cannot open '" + path.string() + "'"};
  }
  std::vector<unsigned char> data {std::istreambuf_iterator<char> {is}, {}};
  auto const fail = [&] (std::string const& why) {
    return IoError {"'" + path.string() + "': " + why};
  };
  if (data.size() < 12 || std::memcmp (data.data(), "RIFF", 4) != 0
      || std::memcmp (data.data() + 8, "WAVE", 4) != 0) {
    throw fail ("not a RIFF/WAVE file");
  }

  bool          have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t   pos = 12;
  while (pos + 8 <= data.size()) {
    std::uint32_t const len  = le32 (&data[pos + 4]);
    std::size_t const   body = pos + 8;
    if (body + len > data.size()) {
      throw fail ("truncated chunk");
    }
    if (std::memcmp (&data[pos], "fmt ", 4) == 0) {
      if (len < 16) {
        throw fail ("short fmt chunk");
      }
      format   = le16 (&data[body]);
      channels = le16 (&data[body + 2]);
      rate     = le32 (&data[body + 4]);
      bits     = le16 (&data[body + 14]);
      have_fmt = true;
    }
    else if (std::memcmp (&data[pos], "data", 4) == 0) {
      if (!have_fmt) {
        throw fail ("data chunk before fmt chunk");
      }
      if (format != 1 || bits != 16 || channels != 1) {
        throw fail (
          "unsupported format (format tag " + std::to_string (format) + ", "
          + std::to_string (channels) + " channel(s), " + std::to_string (bits)
          + " bits); only 16-bit PCM mono is supported");
      }
      WavData w {rate, {}};
      w.samples.resize (len / 2);
      for (std::size_t i = 0; i < w.samples.size(); ++i) {
        auto const s = static_cast<std::int16_t> (le16 (&data[body + 2 * i]));
        w.samples[i] = static_cast<double> (s) / 32768.0;
      }
      return w;
    }
    pos = body + len + (len & 1u);
  }
  throw fail ("no data chunk");
}

void write_wav (std::filesystem::path const& path, std::uint32_t sample_rate, std::span<double const> samples)
{
  std::ofstream os {path, std::ios::binary};
  if (!os) {
    throw IoError {"cannot create '" + path.string() + "'"};
  }
  auto const bytes = static_cast<std::uint32_t> (samples.size() * 2);
  os.write ("RIFF", 4);
  put32 (os, 36 + bytes);
  os.write ("WAVEfmt ", 8);
  put32 (os, 16);
  put16 (os, 1);
  put16 (os, 1);
  put32 (os, sample_rate);
  put32 (os, sample_rate * 2);
  put16 (os, 2);
  put16 (os, 16);
  os.write ("data", 4);
  put32 (os, bytes);
  for (double x : samples) {
    put16 (os, static_cast<std::uint16_t> (to_pcm16 (x)));
  }
  if (!os) {
    throw IoError {"write failed for '" + path.string() + "'"};
  }
}

} // namespace fadline
