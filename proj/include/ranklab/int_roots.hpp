#pragma once

#include <cmath>
#include <cstdint>

namespace ranklab {

// Floor roots, exact over the whole int64 range. Floating-point seeds are
// corrected by integer comparison; products are widened to 128 bits because
// (isqrt(2^63))^2 does not fit in int64.

inline std::int64_t isqrt64(std::int64_t n) {
  if (n <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<__int128>(r) * r > n) --r;
  while (static_cast<__int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline std::int64_t icbrt64(std::int64_t n) {
  if (n <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::cbrt(static_cast<double>(n)));
  while (r > 0 && static_cast<__int128>(r) * r * r > n) --r;
  while (static_cast<__int128>(r + 1) * (r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline std::int64_t i6rt64(std::int64_t n) {
  if (n <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::pow(static_cast<double>(n), 1.0 / 6.0));
  auto pow6 = [](std::int64_t x) {
    __int128 s = static_cast<__int128>(x) * x;
    return s * s * s;
  };
  while (r > 0 && pow6(r) > n) --r;
  while (pow6(r + 1) <= n) ++r;
  return r;
}

}  // namespace ranklab
