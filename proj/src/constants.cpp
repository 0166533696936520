#include "ranklab/constants.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

#include "ranklab/errors.hpp"

namespace ranklab {
namespace {

double density_base() {
  static const double s0 = [] {
    double p = 1.0;
    for (int j = 0; j <= 60; ++j) p /= 1.0 + std::exp2(-j);
    return p;
  }();
  return s0;
}

// 2/(2^k - 1), stable for large k.
double density_step(int k) {
  if (k < 63) return 2.0 / static_cast<double>((std::uint64_t{1} << k) - 1);
  const double inv = std::exp2(-k);
  return 2.0 * inv / (1.0 - inv);
}

}  // namespace

double poonen_rains_s(int n) {
  if (n < 0) throw ValidationError("poonen_rains_s: n must be nonnegative");
  double s = density_base();
  for (int k = 1; k <= n; ++k) s *= density_step(k);
  return s;
}

double brumer_kappa() {
  static const double kappa = [] {
    const double zeta10 = std::pow(std::numbers::pi, 10) / 93555.0;
    return std::pow(2.0, 4.0 / 3.0) / (zeta10 * std::pow(3.0, 1.5));
  }();
  return kappa;
}

double five_kappa_sixths() { return 5.0 * brumer_kappa() / 6.0; }

SelmerDensityTable SelmerDensityTable::build(int nmax) {
  if (nmax < kModeledSelmerMax + 1)
    throw ValidationError("SelmerDensityTable: nmax must be at least 6");
  SelmerDensityTable t;
  t.nmax = nmax;
  t.values.resize(nmax + 1);
  t.values[0] = density_base();
  for (int n = 1; n <= nmax; ++n) t.values[n] = t.values[n - 1] * density_step(n);
  return t;
}

double SelmerDensityTable::at(int n) const {
  if (n < 0 || n > nmax) throw ValidationError("SelmerDensityTable: index out of range");
  return values[n];
}

double s_weighted_sum(SWeightedSumKind kind, int nmax) {
  if (nmax < 1 || nmax > 400)
    throw ValidationError("s_weighted_sum: nmax out of range");
  double total = 0.0;
  double s = density_base();  // s_0
  for (int n = 0; n <= nmax; ++n) {
    if (n > 0) s *= density_step(n);
    switch (kind) {
      case SWeightedSumKind::kTotal:
        total += s;
        break;
      case SWeightedSumKind::kAlternating:
        total += (n % 2 == 0) ? s : -s;
        break;
      case SWeightedSumKind::kOdd:
        if (n % 2 == 1) total += s;
        break;
      case SWeightedSumKind::kFirstMoment:
        total += n * s;
        break;
    }
  }
  return total;
}

}  // namespace ranklab
