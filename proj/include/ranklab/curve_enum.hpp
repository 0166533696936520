#pragma once

#include <cstdint>
#include <vector>

namespace ranklab {

// Integer short-Weierstrass model y^2 = x^3 + Ax + B.
struct WeierstrassPair {
  std::int64_t A = 0;
  std::int64_t B = 0;

  friend bool operator==(const WeierstrassPair&, const WeierstrassPair&) = default;
};

// Height interval with (lo, hi] semantics; prefix counts use lo = 0.
struct HeightInterval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  void validate() const;
};

// max(4|A|^3, 27 B^2) in exact integer arithmetic. Throws if the height
// would not fit in 64 bits.
std::int64_t naive_height(const WeierstrassPair& p);

// Nonsingular (4A^3 + 27B^2 != 0) and minimal (no d > 1 with d^4|A, d^6|B).
bool is_admissible(const WeierstrassPair& p);

// #{(A,B) : max(4|A|^3, 27B^2) <= X, 4A^3 + 27B^2 != 0}. The constraint
// region is the rectangle |A| <= (X/4)^(1/3), |B| <= (X/27)^(1/2); the
// singular locus inside it is (0,0) plus (A,B) = (-3t^2, +-2t^3), which has
// height 108 t^6.
std::int64_t count_all_pairs(std::int64_t X);

// Minimal nonsingular pairs with height <= X, by Mobius inversion over the
// twist scaling (A,B) -> (d^4 A, d^6 B), which multiplies heights by d^12:
//   pi(X) = sum_{d^12 <= X} mu(d) * count_all_pairs(floor(X / d^12)).
std::int64_t count_minimal_prefix(std::int64_t X);

// pi over (lo, hi] as a difference of prefix counts.
std::int64_t count_minimal(const HeightInterval& interval);

// All admissible pairs with height in (lo, hi], ascending (height, A, B).
// Throws CapExceededError (with the exact count) if the interval holds more
// than `cap` pairs. `threads` splits the A-scan; the merged result is
// identical for any thread count.
std::vector<WeierstrassPair> enumerate_minimal(const HeightInterval& interval,
                                               std::int64_t cap,
                                               int threads = 1);

}  // namespace ranklab
