#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "ranklab/dataset.hpp"

namespace ranklab {

// theta_n(X,N): fraction of curves in (X, X+N] with Selmer rank n.
// sample_count is the window total. Empty windows are errors.
RatioPoint moving_theta(const Dataset& data, int n, std::int64_t X, std::int64_t N);

// rho_n(X,N): sum(rank - (n mod 2)) / ((n - (n mod 2)) * #S_n) over the
// Selmer-rank-n curves in the window. sample_count is #S_n.
RatioPoint moving_rho(const Dataset& data, int n, std::int64_t X, std::int64_t N);

// C^n_{1,1} estimate: fraction(rank == n | selmer == n) - rho_n(X,N)^2.
// Requires at least `min_samples` rank-n curves in the window.
double estimate_cov11(const Dataset& data, int n, std::int64_t X, std::int64_t N,
                      std::int64_t min_samples = 30);

// Mean rank over height <= X. With restrict_n, the numerator runs over
// selmer_rank == n only while the denominator stays the total count.
double average_rank(const Dataset& data, std::int64_t X,
                    std::optional<int> restrict_n = std::nullopt);

// Mean Selmer rank over height <= X.
double average_selmer_rank(const Dataset& data, std::int64_t X);

struct PowerFit {
  double D = 0;
  double f = 0;
  double residual = 0;  // weighted RMS in log space
  int point_count = 0;
};

struct ThetaFit {
  double C = 0;
  double e = 0;
  double residual = 0;  // weighted RMS in log space
  int point_count = 0;
};

// Weighted least squares of log v = log D - f log X (weights: sample_count).
PowerFit fit_rho(std::span<const RatioPoint> points, int n);

// Linearization log|s_n/v - 1| = log|C| - e log X with the sign of C fixed
// by the branch (negative iff every v > s_n), then one Gauss-Newton pass on
// the nonlinear form v = s_n/(1 + C X^-e). Points on both sides of s_n
// cannot be fit with one sign and raise an error.
ThetaFit fit_theta(std::span<const RatioPoint> points, int n, double s_n);

}  // namespace ranklab
