#include "fadline/core.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace fadline {

DelayBuffer::DelayBuffer (std::size_t capacity) : _cells (capacity, 0.0)
{
  if (capacity < min_capacity) {
    throw DomainError {
      "DelayBuffer: capacity " + std::to_string (capacity) + " below minimum 4"};
  }
}

void DelayBuffer::clear() noexcept
{
  std::fill (_cells.begin(), _cells.end(), 0.0);
}

FracOffset::FracOffset (double d) : _d {d}
{
  if (!(d >= -1.0 && d <= 1.0)) {
    throw DomainError {
      "FracOffset: d = " + std::to_string (d) + " outside [-1, 1]"};
  }
}

Lagrange2 lagrange2_coeffs (FracOffset d)
{
  return lagrange2_coeffs_unchecked (d.value());
}

namespace {

void check_frequency (double freq_hz, double fs_hz)
{
  if (!(fs_hz > 0.0) || !(freq_hz >= 0.0) || freq_hz > fs_hz * 0.5) {
    throw DomainError {"frequency must lie in [0, fs/2] with fs > 0"};
  }
}

// H(e^{jw}) * e^{jwD}: the response with the nominal delay removed, so its
// argument stays far from the branch cut and needs no unwrapping.
std::complex<double> dealigned_response (Lagrange2 const& h, double d, double w)
{
  using c         = std::complex<double>;
  c const z1      = std::polar (1.0, -w);
  c const z2      = std::polar (1.0, -2.0 * w);
  c const hz      = h.h0 + h.h1 * z1 + h.h2 * z2;
  return hz * std::polar (1.0, w * (1.0 - d));
}

double excess_from (std::complex<double> v, double w)
{
  return w > 0.0 ? -std::arg (v) / w : 0.0;
}

} // namespace

FreqResponse lagrange2_response (FracOffset d, double freq_hz, double fs_hz)
{
  check_frequency (freq_hz, fs_hz);
  double const w  = 2.0 * std::numbers::pi * freq_hz / fs_hz;
  auto const   h  = lagrange2_coeffs (d);
  auto const   v  = dealigned_response (h, d.value(), w);
  double const dn = 1.0 - d.value();
  return {std::abs (v), dn + excess_from (v, w)};
}

double lagrange2_excess_delay (FracOffset d, double freq_hz, double fs_hz)
{
  check_frequency (freq_hz, fs_hz);
  double const w = 2.0 * std::numbers::pi * freq_hz / fs_hz;
  auto const   v = dealigned_response (lagrange2_coeffs (d), d.value(), w);
  return excess_from (v, w);
}

ResponseExtrema response_extrema (double freq_hz, double fs_hz, DRange range)
{
  if (!(range.lo <= range.hi)) {
    throw DomainError {"response_extrema: empty d range"};
  }
  FracOffset const lo {range.lo};
  FracOffset const hi {range.hi};
  check_frequency (freq_hz, fs_hz);

  constexpr double step = 1.0 / 1024.0;
  double const     w    = 2.0 * std::numbers::pi * freq_hz / fs_hz;
  auto const n = static_cast<long> (std::floor ((hi.value() - lo.value()) / step));

  ResponseExtrema ex {
    std::numeric_limits<double>::infinity(),
    -std::numeric_limits<double>::infinity(),
    std::numeric_limits<double>::infinity(),
    -std::numeric_limits<double>::infinity()};

  auto visit = [&] (double d) {
    auto const   v   = dealigned_response (lagrange2_coeffs_unchecked (d), d, w);
    double const mag = std::abs (v);
    double const tau = excess_from (v, w);
    ex.a_min         = std::min (ex.a_min, mag);
    ex.a_max         = std::max (ex.a_max, mag);
    ex.tau_min       = std::min (ex.tau_min, tau);
    ex.tau_max       = std::max (ex.tau_max, tau);
  };
  for (long i = 0; i <= n; ++i) {
    visit (lo.value() + static_cast<double> (i) * step);
  }
  visit (hi.value());
  return ex;
}

} // namespace fadline
