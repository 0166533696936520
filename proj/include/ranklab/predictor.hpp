#pragma once

#include <array>
#include <cstdint>
#include <functional>

#include "ranklab/rank_model.hpp"

namespace ranklab {

struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_depth = 60;
};

// Integral of g(H) H^(-1/6) over [lo, hi]. The substitution u = H^(5/6)
// turns it into (6/5) * integral of g(u^(6/5)) du, which removes the
// endpoint singularity at 0; the u-range is then cut at powers of ten and
// each piece handled by adaptive Simpson. Throws ComputeError with the
// achieved error estimate if the depth budget cannot reach the tolerance.
double integrate_density(const std::function<double(double)>& g, double lo, double hi,
                         const QuadratureSpec& spec);

// Expected count of Selmer-rank-n curves up to height X:
// (5k/6) * integral_0^X theta_n(H) H^(-1/6) dH.
double predict_pi_Sn(int n, double X, const ModelParams& p, const QuadratureSpec& spec);

// Expected count of curves with MW rank r among Selmer rank n:
// (5k/6) * integral_0^X theta_n(H) p_n(r at H) H^(-1/6) dH, where
// p_n(r) = binom(floor(n/2), j) E^n_{floor(r/2), j} with j = (n-r)/2.
double predict_pi_Rr_Sn(int r, int n, double X, const ModelParams& p, const QuadratureSpec& spec);

// Expected count of rank-r curves: the sum over modeled n = r, r+2, .. 5.
double predict_pi_Rr(int r, double X, const ModelParams& p, const QuadratureSpec& spec);

// The O(X^(1/2)) uncertainty band reported next to rank-count predictions.
double rank_count_error_band(int r, double X, const ModelParams& p);

// Expected average Selmer rank at X:
// (5/6) X^(-5/6) * integral_0^X (sum_n n theta_n(H)) H^(-1/6) dH.
double predict_avg_selmer_rank(double X, const ModelParams& p, const QuadratureSpec& spec);

// Series evaluation state: h_n is the smallest integer height where
// |C_n X^-e_n| < 1 (the geometric expansion of 1/(1+C_n X^-e_n) starts to
// converge); the numeric split point is pushed up until the ratio is <= 1/2
// so 200 terms always reach machine accuracy. tau_n/mu_n make the series
// form match the exact integral from 1; lambda_r plays the same role for
// the per-rank count series (r = 1..3).
class SeriesParams {
 public:
  static SeriesParams build(const ModelParams& p, const QuadratureSpec& spec);

  std::int64_t h(int n) const { return h_[n]; }
  double split(int n) const { return split_[n]; }
  double mu(int n) const { return mu_[n]; }
  double tau(int n) const { return tau_[n]; }
  // Whether |C_n X^-e_n|^terms < 1e-12 already holds at X = h_n + 1.
  bool tail_bound_ok(int n) const { return tail_ok_[n]; }
  int terms() const { return terms_; }

  // s_n * (5/6) * (tau_n + A_n(X)) / X^(5/6): the rank-weighted average-rank
  // contribution of Selmer rank n. Requires X > split(n).
  double avg_rank_term(int n, double X, const ModelParams& p) const;

  // lambda_r + kappa s_r Phi_r(X) for r = 1..3. Requires X > max(h_r, split_r).
  double pi_rank_series(int r, double X, const ModelParams& p) const;

 private:
  std::array<std::int64_t, 6> h_{};
  std::array<double, 6> split_{};
  std::array<double, 6> mu_{};
  std::array<double, 6> tau_{};
  std::array<bool, 6> tail_ok_{};
  std::array<double, 4> lambda_{};
  std::array<double, 4> rank_split_{};
  int terms_ = 200;

  friend double series_pi_rank(int, double, const ModelParams&, const QuadratureSpec&,
                               const SeriesParams*);
};

enum class AvgRankMethod { kQuadrature, kSeries };

// Expected average rank over all curves of height <= X, summing the five
// modeled Selmer ranks. Quadrature integrates
// (5/6) X^(-5/6) theta_n(H) ((n mod 2) + 2 floor(n/2) rho_n(H)) H^(-1/6)
// from 1 and is refused above 1e15; the series method uses the geometric
// expansion above each rank's split point and exact quadrature below it.
double predict_avg_rank(double X, const ModelParams& p, const QuadratureSpec& spec,
                        AvgRankMethod method, const SeriesParams* series = nullptr);

// Series form of predict_pi_Rr_Sn(r, r, X) for r = 1..3. Refuses X <= h_r,
// where the geometric expansion diverges.
double series_pi_rank(int r, double X, const ModelParams& p, const QuadratureSpec& spec,
                      const SeriesParams* series = nullptr);

enum class StdErrKind { kTheta, kRho1, kRho2 };

// Closed-form predicted standard errors of the moving ratios.
//   theta: sqrt(6 X^(1/6) theta(1-theta) / (5 N kappa))
//   rho1:  sqrt(floor(n/2)(rho(1-rho) + (floor(n/2)-1) C11) / observed_count)
//   rho2:  as rho1 with the observed count replaced by the model's
//          expected window count (5 kappa s_n N) / (6 X^(1/6) (1+C_n X^-e_n)).
double predicted_std_error(StdErrKind kind, int n, double X, double N, const ModelParams& p,
                           double observed_count = 0.0);

}  // namespace ranklab
