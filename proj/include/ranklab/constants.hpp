#pragma once

#include <vector>

namespace ranklab {

// Highest Selmer rank carried by the parametric model. Mass above it is
// folded into the rank-0 residual.
inline constexpr int kModeledSelmerMax = 5;

// s_n = (prod_{j>=0} 1/(1+2^-j)) * prod_{k=1}^n 2/(2^k - 1).
// The infinite product is truncated at j = 60; the tail is below 1e-18
// relative, far inside the 1e-12 accuracy contract.
double poonen_rains_s(int n);

// kappa = 2^(4/3) / (zeta(10) * 3^(3/2)), zeta(10) = pi^10 / 93555.
double brumer_kappa();

// 5*kappa/6, the coefficient of the height density N/X^(1/6).
double five_kappa_sixths();

struct SelmerDensityTable {
  std::vector<double> values;  // s_0 .. s_nmax
  int nmax = 0;

  static SelmerDensityTable build(int nmax);
  double at(int n) const;
};

enum class SWeightedSumKind { kTotal, kAlternating, kOdd, kFirstMoment };

// Truncated sums over the s_n sequence. Tail beyond nmax is bounded by
// s_1 / 2^(nmax(nmax-1)/2 - 1), the majorant t_n of the density sequence.
double s_weighted_sum(SWeightedSumKind kind, int nmax);

}  // namespace ranklab
