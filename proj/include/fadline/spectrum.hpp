#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fadline {

// Reusable real-to-complex FFT of a fixed size (FFTW backed). Not
// thread-safe: plan creation in FFTW is global.
class RealFft {
public:
  explicit RealFft (std::size_t n);
  ~RealFft();
  RealFft (RealFft const&)            = delete;
  RealFft& operator= (RealFft const&) = delete;

  std::size_t size() const noexcept { return _n; }
  std::size_t bins() const noexcept { return _n / 2 + 1; }

  // Input shorter than size() is zero padded.
  std::span<std::complex<double> const> forward (std::span<double const> in);

private:
  std::size_t                       _n;
  std::vector<double>               _in;
  std::vector<std::complex<double>> _out;
  void*                             _plan;
};

std::vector<double> hann_window (std::size_t n);

// Magnitude of the DFT bin `bin` of x (rectangular window).
double dft_bin_magnitude (std::span<double const> x, std::size_t bin);

} // namespace fadline
