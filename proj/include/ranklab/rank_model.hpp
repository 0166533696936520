#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <tuple>

namespace ranklab {

struct ThetaCoeff {
  double C = 0.0;
  double e = 0.0;
};

struct RhoCoeff {
  double D = 0.0;
  double f = 0.0;
};

// The constant set of the parametric model: Selmer densities s_n, the
// theta_n(X) = s_n/(1 + C_n X^-e_n) coefficients for n = 1..5, the
// rho_n(X) = D_n X^-f_n coefficients for n = 2..5, and the constant
// symbol-pair covariances for n = 4, 5.
struct ModelParams {
  std::array<double, 6> s{};
  std::array<ThetaCoeff, 6> theta_coeff{};  // index 1..5
  std::array<RhoCoeff, 6> rho_coeff{};      // index 2..5
  std::array<double, 6> cov11{};            // index 2..5

  static ModelParams paper_defaults();

  // Numeric sanity: finite values, e,f >= 0, D >= 0, densities in [0,1].
  void validate() const;

  std::uint64_t hash() const;
};

// Covariance entries C^n_{s,t}, keyed by (n, s, t) with s,t >= 1 and
// s + t <= floor(n/2). Entries absent from the table raise an error naming
// the key; C^n_{0,t} and C^n_{s,0} are identically zero and never stored.
class CovarianceTable {
 public:
  static CovarianceTable from_params(const ModelParams& p);

  void set(int n, int s, int t, double value);
  double get(int n, int s, int t) const;

 private:
  std::map<std::tuple<int, int, int>, double> entries_;
};

// theta_n(X), clamped to [0,1]. Requires 1 <= n <= 5 and X >= 1; throws if
// the denominator 1 + C_n X^-e_n is not positive.
double theta(int n, double X, const ModelParams& p, bool* clamp_event = nullptr);

// Residual mass 1 - sum_{n=1..5} theta_n(X); throws if negative beyond
// rounding (the params make the modeled masses exceed 1).
double theta_zero(double X, const ModelParams& p);

// min(1, D_n X^-f_n) for 2 <= n <= 5, X >= 1. The clamp fires below
// X = D_n^(1/f_n), where the fitted power law exceeds 1.
double rho(int n, double X, const ModelParams& p, bool* clamp_event = nullptr);

// E^n_{s,t}: expected value of Y_1..Y_s (1-Y_{s+1})..(1-Y_{s+t}) for the
// equicorrelated symbol variables, via the recursion
//   E_{1,0} = rho,   E_{s,0} = E_{s-1,0} E_{1,0} + C_{s-1,1},
//   E_{0,t} = E_{0,t-1} E_{0,1} - sum_{i<t} (-1)^i binom(t-1,i) C_{1,i},
//   E_{s,t} = E_{s,0} E_{0,t} + sum_{i<=t} (-1)^i binom(t,i) C_{s,i}.
// With a zero table this is rho^s (1-rho)^t exactly.
double expected_product(int n, int s, int t, double rho_value, const CovarianceTable& cov);

// Two exchangeable Bernoulli(rho) draws with covariance c, as cell
// probabilities. c outside the feasibility window
// [-min(rho^2, (1-rho)^2), rho(1-rho)] is clamped to it.
struct JointBernoulliPair {
  double p11 = 0, p10 = 0, p01 = 0, p00 = 0;
  bool clamped = false;
};
JointBernoulliPair joint_bernoulli_pair(double rho_value, double c);

// p_n(r) for r = 0..n given the MW probability directly. Parity-mismatched
// r gives 0. For n = 4,5 the cells come from joint_bernoulli_pair, so the
// distribution always sums to 1 with nonnegative entries.
struct RankDistribution {
  std::array<double, 6> p{};
  bool clamped = false;
};
RankDistribution rank_distribution_given_rho(int n, double rho_value, double cov11);

// p_n(r) at height X under the params (rho evaluated and clamped there).
RankDistribution rank_distribution(int n, double X, const ModelParams& p);
double rank_probability(int n, int r, double X, const ModelParams& p);

}  // namespace ranklab
