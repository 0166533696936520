#include "ranklab/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ranklab/constants.hpp"
#include "ranklab/errors.hpp"

namespace ranklab {
namespace {

constexpr double kQuadratureHeightCeiling = 1e15;

// Continuum extension of the model below the integer-height floor: the
// prediction integrals run from 0, where the fitted forms can leave [0,1]
// (for n = 1 the denominator even changes sign near H ~ 2e-5). Mass outside
// [0,1] is clamped; a nonpositive denominator contributes none.
double theta_cont(const ModelParams& p, int n, double H) {
  const auto& c = p.theta_coeff[n];
  const double den = 1.0 + c.C * std::pow(H, -c.e);
  if (!(den > 0.0)) return 0.0;
  return std::clamp(p.s[n] / den, 0.0, 1.0);
}

double rho_cont(const ModelParams& p, int n, double H) {
  const auto& c = p.rho_coeff[n];
  return std::min(1.0, c.D * std::pow(H, -c.f));
}

// (n mod 2) + 2 floor(n/2) rho_n(H): expected rank of a Selmer-rank-n curve.
double mw_weight(const ModelParams& p, int n, double H) {
  const double parity = n % 2;
  if (n < 2) return parity;
  return parity + 2.0 * (n / 2) * rho_cont(p, n, H);
}

struct AdaptState {
  double err_accum = 0.0;
  bool depth_hit = false;
};

template <typename F>
double adsimp(const F& f, double a, double m, double b, double fa, double fm, double fb,
              double whole, double tol, int depth, AdaptState& st) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    if (depth <= 0 && std::fabs(delta) > 15.0 * tol) st.depth_hit = true;
    st.err_accum += std::fabs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return adsimp(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1, st) +
         adsimp(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1, st);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol, int depth, AdaptState& st) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adsimp(f, a, m, b, fa, fm, fb, whole, tol, depth, st);
}

}  // namespace

double integrate_density(const std::function<double(double)>& g, double lo, double hi,
                         const QuadratureSpec& spec) {
  if (!(lo >= 0.0) || !(hi >= lo) || !std::isfinite(hi))
    throw ValidationError("integrate_density: need 0 <= lo <= hi, finite");
  if (lo == hi) return 0.0;

  const auto f = [&g](double u) { return g(std::pow(u, 1.2)); };
  const double u0 = lo == 0.0 ? 0.0 : std::pow(lo, 5.0 / 6.0);
  const double u1 = std::pow(hi, 5.0 / 6.0);

  // Cut the u-range at powers of ten so adaptivity works per scale.
  std::vector<double> cuts{u0};
  for (double c = 1.0; c < u1; c *= 10.0) {
    if (c > u0) cuts.push_back(c);
  }
  cuts.push_back(u1);

  const std::size_t pieces = cuts.size() - 1;
  std::vector<double> rough(pieces);
  double rough_sum = 0.0, rough_abs = 0.0;
  for (std::size_t i = 0; i < pieces; ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const double m = 0.5 * (a + b);
    rough[i] = (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
    rough_sum += rough[i];
    rough_abs += std::fabs(rough[i]);
  }
  const double target = std::max(spec.abs_tol, spec.rel_tol * std::fabs(rough_sum));

  AdaptState st;
  double total = 0.0;
  for (std::size_t i = 0; i < pieces; ++i) {
    const double share =
        rough_abs > 0.0 ? std::max(std::fabs(rough[i]) / rough_abs, 1.0 / static_cast<double>(pieces))
                        : 1.0 / static_cast<double>(pieces);
    const double tol = 0.5 * target * share;
    total += adaptive_simpson(f, cuts[i], cuts[i + 1], tol, spec.max_depth, st);
  }
  if (st.depth_hit && st.err_accum > 10.0 * target)
    throw ComputeError("integrate_density: max depth reached; achieved error estimate " +
                       std::to_string(st.err_accum) + " exceeds target " + std::to_string(target));
  return 1.2 * total;
}

double predict_pi_Sn(int n, double X, const ModelParams& p, const QuadratureSpec& spec) {
  if (n < 1 || n > kModeledSelmerMax) throw ValidationError("predict_pi_Sn: n outside 1..5");
  if (!(X >= 1.0)) throw ValidationError("predict_pi_Sn: X must be >= 1");
  return five_kappa_sixths() *
         integrate_density([&](double H) { return theta_cont(p, n, H); }, 0.0, X, spec);
}

double predict_pi_Rr_Sn(int r, int n, double X, const ModelParams& p, const QuadratureSpec& spec) {
  if (n < 1 || n > kModeledSelmerMax) throw ValidationError("predict_pi_Rr_Sn: n outside 1..5");
  if (r < 0 || r > n) throw ValidationError("predict_pi_Rr_Sn: need 0 <= r <= n");
  if ((n - r) % 2 != 0)
    throw ValidationError("predict_pi_Rr_Sn: rank parity must match the Selmer rank");
  if (!(X >= 1.0)) throw ValidationError("predict_pi_Rr_Sn: X must be >= 1");

  const auto integrand = [&](double H) {
    const double th = theta_cont(p, n, H);
    if (th == 0.0) return 0.0;
    if (n == 1) return th;
    const RankDistribution d =
        rank_distribution_given_rho(n, rho_cont(p, n, H), n >= 4 ? p.cov11[n] : 0.0);
    return th * d.p[r];
  };
  return five_kappa_sixths() * integrate_density(integrand, 0.0, X, spec);
}

double predict_pi_Rr(int r, double X, const ModelParams& p, const QuadratureSpec& spec) {
  if (r < 1 || r > kModeledSelmerMax) throw ValidationError("predict_pi_Rr: r outside 1..5");
  double total = 0.0;
  for (int n = r; n <= kModeledSelmerMax; n += 2) total += predict_pi_Rr_Sn(r, n, X, p, spec);
  return total;
}

double rank_count_error_band(int r, double X, const ModelParams& p) {
  if (r < 1 || r > kModeledSelmerMax) throw ValidationError("rank_count_error_band: r outside 1..5");
  return p.s[r] * std::sqrt(X);
}

double predict_avg_selmer_rank(double X, const ModelParams& p, const QuadratureSpec& spec) {
  if (!(X >= 1.0)) throw ValidationError("predict_avg_selmer_rank: X must be >= 1");
  const auto integrand = [&](double H) {
    double sum = 0.0;
    for (int n = 1; n <= kModeledSelmerMax; ++n) sum += n * theta_cont(p, n, H);
    return sum;
  };
  return (5.0 / 6.0) * integrate_density(integrand, 0.0, X, spec) / std::pow(X, 5.0 / 6.0);
}

namespace {

double avg_rank_term_quadrature(int n, double X, const ModelParams& p,
                                const QuadratureSpec& spec) {
  const auto integrand = [&](double H) { return theta_cont(p, n, H) * mw_weight(p, n, H); };
  return (5.0 / 6.0) * integrate_density(integrand, 1.0, X, spec) / std::pow(X, 5.0 / 6.0);
}

// Antiderivative of the geometrically expanded integrand, evaluated at T:
//   sum_m q^m [ (n mod 2) T^(5/6) / (5/6 - m e)
//             + 2 floor(n/2) D T^(5/6 - f) / (5/6 - f - m e) ],  q = -C T^-e.
double series_antiderivative(int n, double T, const ModelParams& p, int terms) {
  const auto& tc = p.theta_coeff[n];
  const double parity = n % 2;
  const double half = n / 2;
  const double D = n >= 2 ? p.rho_coeff[n].D : 0.0;
  const double f = n >= 2 ? p.rho_coeff[n].f : 0.0;
  const double q = -tc.C * std::pow(T, -tc.e);
  const double t56 = std::pow(T, 5.0 / 6.0);
  const double t56f = n >= 2 ? std::pow(T, 5.0 / 6.0 - f) : 0.0;
  double qpow = 1.0, total = 0.0;
  for (int m = 0; m <= terms; ++m) {
    double term = 0.0;
    if (parity != 0.0) term += parity * t56 / (5.0 / 6.0 - m * tc.e);
    if (half != 0.0) term += 2.0 * half * D * t56f / (5.0 / 6.0 - f - m * tc.e);
    total += qpow * term;
    qpow *= q;
    if (qpow == 0.0) break;
  }
  return total;
}

// X^(5/6-...) power series of the per-rank count integral (r = 1..3):
//   Phi_1(T) = T^(5/6) sum_m q^m / (1 - (6/5) m e)
//   Phi_r(T) = D T^(5/6-f) sum_m q^m / (1 - (6/5)(f + m e)),  r = 2,3.
double phi_rank(int r, double T, const ModelParams& p, int terms) {
  const auto& tc = p.theta_coeff[r];
  const double q = -tc.C * std::pow(T, -tc.e);
  double qpow = 1.0, sum = 0.0;
  if (r == 1) {
    for (int m = 0; m <= terms; ++m) {
      sum += qpow / (1.0 - 1.2 * m * tc.e);
      qpow *= q;
      if (qpow == 0.0) break;
    }
    return std::pow(T, 5.0 / 6.0) * sum;
  }
  const double D = p.rho_coeff[r].D, f = p.rho_coeff[r].f;
  for (int m = 0; m <= terms; ++m) {
    sum += qpow / (1.0 - 1.2 * (f + m * tc.e));
    qpow *= q;
    if (qpow == 0.0) break;
  }
  return D * std::pow(T, 5.0 / 6.0 - f) * sum;
}

// Any coefficient denominator within eps of zero makes the expansion
// unusable for these params.
bool series_denominators_ok(int n, const ModelParams& p, int terms) {
  const double e = p.theta_coeff[n].e;
  const double f = n >= 2 ? p.rho_coeff[n].f : 0.0;
  for (int m = 0; m <= terms; ++m) {
    if (std::fabs(5.0 / 6.0 - m * e) < 1e-6) return false;
    if (n >= 2 && std::fabs(5.0 / 6.0 - f - m * e) < 1e-6) return false;
  }
  return true;
}

}  // namespace

SeriesParams SeriesParams::build(const ModelParams& p, const QuadratureSpec& spec) {
  SeriesParams sp;
  for (int n = 1; n <= kModeledSelmerMax; ++n) {
    const double C = p.theta_coeff[n].C, e = p.theta_coeff[n].e;
    const double absC = std::fabs(C);

    // Exact integer search for the first height where the expansion converges.
    std::int64_t h = 1;
    if (absC >= 1.0) {
      if (e <= 0.0) {
        h = std::numeric_limits<std::int64_t>::max();
      } else {
        std::int64_t lo = 1, hi = 2;
        while (absC * std::pow(static_cast<double>(hi), -e) >= 1.0) hi *= 2;
        while (lo + 1 < hi) {
          const std::int64_t mid = lo + (hi - lo) / 2;
          if (absC * std::pow(static_cast<double>(mid), -e) >= 1.0)
            lo = mid;
          else
            hi = mid;
        }
        h = hi;
        while (h > 1 && absC * std::pow(static_cast<double>(h - 1), -e) < 1.0) --h;
      }
    }
    sp.h_[n] = h;

    double split = 1.0;
    if (absC > 0.5) {
      split = (e > 0.0) ? std::pow(2.0 * absC, 1.0 / e)
                        : std::numeric_limits<double>::infinity();
    }
    if (!series_denominators_ok(n, p, sp.terms_))
      split = std::numeric_limits<double>::infinity();
    sp.split_[n] = std::max(split, 1.0);

    sp.tail_ok_[n] = false;
    if (h != std::numeric_limits<std::int64_t>::max()) {
      const double ratio = absC * std::pow(static_cast<double>(h) + 1.0, -e);
      sp.tail_ok_[n] = std::pow(ratio, sp.terms_) < 1e-12;
    }

    if (std::isfinite(sp.split_[n]) && sp.split_[n] > 1.0) {
      const auto integrand = [&](double H) {
        const double den = 1.0 + C * std::pow(H, -e);
        if (!(den > 0.0)) return 0.0;
        return mw_weight(p, n, H) / den;
      };
      sp.mu_[n] = integrate_density(integrand, 1.0, sp.split_[n], spec);
      sp.tau_[n] = sp.mu_[n] - series_antiderivative(n, sp.split_[n], p, sp.terms_);
    } else if (std::isfinite(sp.split_[n])) {
      sp.mu_[n] = 0.0;
      sp.tau_[n] = -series_antiderivative(n, 1.0, p, sp.terms_);
    }
  }

  for (int r = 1; r <= 3; ++r) {
    sp.rank_split_[r] = sp.split_[r];
    if (std::isfinite(sp.rank_split_[r])) {
      const double at_split = std::max(sp.rank_split_[r], 1.0);
      sp.lambda_[r] = predict_pi_Rr_Sn(r, r, at_split, p, spec) -
                      brumer_kappa() * p.s[r] * phi_rank(r, at_split, p, sp.terms_);
    }
  }
  return sp;
}

double SeriesParams::avg_rank_term(int n, double X, const ModelParams& p) const {
  if (!(X > split_[n]))
    throw ValidationError("avg_rank_term: X below the series split point for n=" +
                          std::to_string(n));
  return p.s[n] * (5.0 / 6.0) * (tau_[n] + series_antiderivative(n, X, p, terms_)) /
         std::pow(X, 5.0 / 6.0);
}

double SeriesParams::pi_rank_series(int r, double X, const ModelParams& p) const {
  return lambda_[r] + brumer_kappa() * p.s[r] * phi_rank(r, X, p, terms_);
}

double predict_avg_rank(double X, const ModelParams& p, const QuadratureSpec& spec,
                        AvgRankMethod method, const SeriesParams* series) {
  if (!(X >= 1.0)) throw ValidationError("predict_avg_rank: X must be >= 1");

  if (method == AvgRankMethod::kQuadrature) {
    if (X > kQuadratureHeightCeiling)
      throw ValidationError("predict_avg_rank: quadrature refused above 1e15; use the series");
    double total = 0.0;
    for (int n = 1; n <= kModeledSelmerMax; ++n)
      total += avg_rank_term_quadrature(n, X, p, spec);
    return total;
  }

  SeriesParams local;
  if (!series) {
    local = SeriesParams::build(p, spec);
    series = &local;
  }
  double total = 0.0;
  for (int n = 1; n <= kModeledSelmerMax; ++n) {
    if (X > series->split(n))
      total += series->avg_rank_term(n, X, p);
    else
      total += avg_rank_term_quadrature(n, X, p, spec);
  }
  return total;
}

double series_pi_rank(int r, double X, const ModelParams& p, const QuadratureSpec& spec,
                      const SeriesParams* series) {
  if (r < 1 || r > 3) throw ValidationError("series_pi_rank: r outside 1..3");
  SeriesParams local;
  if (!series) {
    local = SeriesParams::build(p, spec);
    series = &local;
  }
  if (!(X > static_cast<double>(series->h(r))))
    throw ValidationError("series_pi_rank: X <= h_r, the expansion diverges");
  if (!(X > series->rank_split_[r])) return predict_pi_Rr_Sn(r, r, X, p, spec);
  return series->pi_rank_series(r, X, p);
}

double predicted_std_error(StdErrKind kind, int n, double X, double N, const ModelParams& p,
                           double observed_count) {
  if (!(X >= 1.0) || !(N >= 1.0))
    throw ValidationError("predicted_std_error: need X, N >= 1");

  if (kind == StdErrKind::kTheta) {
    const double th = theta(n, X, p);
    return std::sqrt(6.0 * std::pow(X, 1.0 / 6.0) * th * (1.0 - th) /
                     (5.0 * N * brumer_kappa()));
  }

  if (n < 2 || n > kModeledSelmerMax)
    throw ValidationError("predicted_std_error: rho kinds need n in 2..5");
  const double half = n / 2;
  const double r = rho(n, X, p);
  const double c11 = n >= 4 ? p.cov11[n] : 0.0;
  const double var = r * (1.0 - r) + (half - 1.0) * c11;

  if (kind == StdErrKind::kRho1) {
    if (!(observed_count > 0.0))
      throw ValidationError("predicted_std_error: rho1 needs the observed window count");
    return std::sqrt(half * var / observed_count);
  }

  const auto& tc = p.theta_coeff[n];
  const double theta_factor = 1.0 + tc.C * std::pow(X, -tc.e);
  return std::sqrt(6.0 * std::pow(X, 1.0 / 6.0) * theta_factor * half * var /
                   (5.0 * brumer_kappa() * p.s[n] * N));
}

}  // namespace ranklab
