#include "fadline/fir_line.hpp"

#include <algorithm>
#include <string>

namespace fadline {

namespace {

void check_delay (std::size_t capacity, double delay)
{
  if (!(delay >= 2.0 && delay <= static_cast<double> (capacity) - 2.0)) {
    throw DomainError {
      "FirLine: delay " + std::to_string (delay) + " outside [2, "
      + std::to_string (capacity - 2) + "]"};
  }
}

} // namespace

FirLine::FirLine (std::size_t capacity, double initial_delay, bool erase_after_read)
  : _buf {std::max<std::size_t> (capacity, DelayBuffer::min_capacity)}
  , _delay {initial_delay}
  , _erase {erase_after_read}
{
  if (capacity < 8) {
    throw DomainError {"FirLine: capacity must be at least 8"};
  }
  check_delay (capacity, initial_delay);
}

void FirLine::set_delay (double delay)
{
  check_delay (_buf.size(), delay);
  _delay = delay;
}

void FirLine::reset() noexcept
{
  _buf.clear();
  _write         = 0;
  _now           = 0;
  _erased_upto   = 0;
  _erase_started = false;
}

void FirLine::erase_behind (std::int64_t first_needed) noexcept
{
  // cells older than now - B + 1 alias newer data
  auto const oldest = _now - static_cast<std::int64_t> (_buf.size()) + 1;
  if (!_erase_started) {
    _erased_upto   = first_needed;
    _erase_started = true;
  }
  for (auto a = std::max (_erased_upto, oldest); a < first_needed; ++a) {
    _buf[a] = 0.0;
  }
  _erased_upto = std::max (_erased_upto, first_needed);
}

} // namespace fadline
