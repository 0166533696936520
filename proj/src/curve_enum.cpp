#include "ranklab/curve_enum.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <limits>
#include <thread>

#include "ranklab/errors.hpp"
#include "ranklab/int_roots.hpp"

namespace ranklab {
namespace {

constexpr std::int64_t kInt64Max = std::numeric_limits<std::int64_t>::max();

// d^12 <= 2^63 only for d <= 38.
constexpr int kMaxTwistScale = 38;

const std::array<int, kMaxTwistScale + 1>& mobius_table() {
  static const auto mu = [] {
    std::array<int, kMaxTwistScale + 1> m{};
    m[1] = 1;
    for (int i = 2; i <= kMaxTwistScale; ++i) {
      int x = i, cnt = 0;
      bool squarefree = true;
      for (int p = 2; p * p <= x; ++p) {
        if (x % p == 0) {
          x /= p;
          ++cnt;
          if (x % p == 0) {
            squarefree = false;
            break;
          }
        }
      }
      if (x > 1) ++cnt;
      m[i] = squarefree ? (cnt % 2 == 0 ? 1 : -1) : 0;
    }
    return m;
  }();
  return mu;
}

__int128 pow12(std::int64_t d) {
  __int128 s = static_cast<__int128>(d) * d;  // d^2
  __int128 c = s * d;                         // d^3
  __int128 h = c * c;                         // d^6
  return h * h;                               // d^12
}

}  // namespace

void HeightInterval::validate() const {
  if (lo < 0 || hi < lo) throw ValidationError("HeightInterval: need 0 <= lo <= hi");
}

std::int64_t naive_height(const WeierstrassPair& p) {
  const __int128 a = p.A < 0 ? -static_cast<__int128>(p.A) : p.A;
  const __int128 b = p.B;
  const __int128 ha = 4 * a * a * a;
  const __int128 hb = 27 * b * b;
  const __int128 h = ha > hb ? ha : hb;
  if (h > kInt64Max)
    throw ValidationError("naive_height: height exceeds 64-bit range");
  return static_cast<std::int64_t>(h);
}

bool is_admissible(const WeierstrassPair& p) {
  const __int128 disc =
      4 * static_cast<__int128>(p.A) * p.A * p.A + 27 * static_cast<__int128>(p.B) * p.B;
  if (disc == 0) return false;
  const std::int64_t absA = std::llabs(p.A);
  const std::int64_t absB = std::llabs(p.B);
  for (std::int64_t d = 2;; ++d) {
    const __int128 d2 = static_cast<__int128>(d) * d;
    const __int128 d4 = d2 * d2;
    const __int128 d6 = d4 * d2;
    if (absA != 0) {
      if (d4 > absA) break;
    } else {
      if (d6 > absB) break;
    }
    const auto d4i = static_cast<std::int64_t>(d4);
    if (absA % d4i != 0) continue;
    if (d6 > absB && absB != 0) continue;
    if (absB == 0 || absB % static_cast<std::int64_t>(d6) == 0) return false;
  }
  return true;
}

std::int64_t count_all_pairs(std::int64_t X) {
  if (X < 0) throw ValidationError("count_all_pairs: X must be nonnegative");
  if (X == 0) return 0;
  const std::int64_t a = icbrt64(X / 4);
  const std::int64_t b = isqrt64(X / 27);
  const std::int64_t t = i6rt64(X / 108);
  return (2 * a + 1) * (2 * b + 1) - 1 - 2 * t;
}

std::int64_t count_minimal_prefix(std::int64_t X) {
  if (X < 0) throw ValidationError("count_minimal_prefix: X must be nonnegative");
  std::int64_t total = 0;
  const auto& mu = mobius_table();
  for (std::int64_t d = 1; d <= kMaxTwistScale && pow12(d) <= X; ++d) {
    if (mu[d] == 0) continue;
    total += mu[d] * count_all_pairs(static_cast<std::int64_t>(X / pow12(d)));
  }
  return total;
}

std::int64_t count_minimal(const HeightInterval& interval) {
  interval.validate();
  return count_minimal_prefix(interval.hi) - count_minimal_prefix(interval.lo);
}

std::vector<WeierstrassPair> enumerate_minimal(const HeightInterval& interval,
                                               std::int64_t cap, int threads) {
  interval.validate();
  const std::int64_t exact = count_minimal(interval);
  if (exact > cap)
    throw CapExceededError("enumerate_minimal: interval holds " + std::to_string(exact) +
                               " pairs, cap is " + std::to_string(cap),
                           exact);

  const std::int64_t amax = icbrt64(interval.hi / 4);
  const std::int64_t bmax = isqrt64(interval.hi / 27);

  auto scan = [&](std::int64_t a_first, std::int64_t a_last, std::vector<WeierstrassPair>& out) {
    for (std::int64_t A = a_first; A <= a_last; ++A) {
      for (std::int64_t B = -bmax; B <= bmax; ++B) {
        const WeierstrassPair p{A, B};
        const std::int64_t h = naive_height(p);
        if (h <= interval.lo || h > interval.hi) continue;
        if (is_admissible(p)) out.push_back(p);
      }
    }
  };

  std::vector<WeierstrassPair> pairs;
  if (threads <= 1) {
    scan(-amax, amax, pairs);
  } else {
    const auto n = static_cast<std::size_t>(threads);
    std::vector<std::vector<WeierstrassPair>> parts(n);
    std::vector<std::thread> workers;
    const std::int64_t span = 2 * amax + 1;
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t first = -amax + static_cast<std::int64_t>(i) * span / threads;
      const std::int64_t last = -amax + static_cast<std::int64_t>(i + 1) * span / threads - 1;
      workers.emplace_back([&, first, last, i] { scan(first, last, parts[i]); });
    }
    for (auto& w : workers) w.join();
    for (auto& part : parts) pairs.insert(pairs.end(), part.begin(), part.end());
  }

  std::sort(pairs.begin(), pairs.end(), [](const WeierstrassPair& x, const WeierstrassPair& y) {
    const std::int64_t hx = naive_height(x), hy = naive_height(y);
    if (hx != hy) return hx < hy;
    if (x.A != y.A) return x.A < y.A;
    return x.B < y.B;
  });
  return pairs;
}

}  // namespace ranklab
