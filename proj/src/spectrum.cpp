#include "fadline/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fftw3.h>

#include "fadline/core.hpp"

namespace fadline {

RealFft::RealFft (std::size_t n) : _n {n}, _in (n, 0.0), _out (n / 2 + 1)
{
  if (n < 2) {
    throw DomainError {"RealFft: size must be at least 2"};
  }
  _plan = fftw_plan_dft_r2c_1d (
    static_cast<int> (n),
    _in.data(),
    reinterpret_cast<fftw_complex*> (_out.data()),
    FFTW_ESTIMATE);
}

RealFft::~RealFft()
{
  fftw_destroy_plan (static_cast<fftw_plan> (_plan));
}

std::span<std::complex<double> const> RealFft::forward (std::span<double const> in)
{
  auto const n = std::min (in.size(), _n);
  std::copy_n (in.begin(), n, _in.begin());
  std::fill (_in.begin() + static_cast<std::ptrdiff_t> (n), _in.end(), 0.0);
  fftw_execute (static_cast<fftw_plan> (_plan));
  return _out;
}

std::vector<double> hann_window (std::size_t n)
{
  std::vector<double> w (n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos (2.0 * std::numbers::pi * static_cast<double> (i) / static_cast<double> (n));
  }
  return w;
}

double dft_bin_magnitude (std::span<double const> x, std::size_t bin)
{
  double       re = 0.0;
  double       im = 0.0;
  double const w  = 2.0 * std::numbers::pi * static_cast<double> (bin) / static_cast<double> (x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double const a = w * static_cast<double> (i);
    re += x[i] * std::cos (a);
    im -= x[i] * std::sin (a);
  }
  return std::hypot (re, im);
}

} // namespace fadline
