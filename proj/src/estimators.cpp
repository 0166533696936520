#include "ranklab/estimators.hpp"

#include <cmath>
#include <set>
#include <string>

#include "ranklab/constants.hpp"
#include "ranklab/errors.hpp"

namespace ranklab {
namespace {

void require_window(std::int64_t X, std::int64_t N) {
  if (X < 0 || N < 1) throw ValidationError("window: need X >= 0 and N >= 1");
}

struct WeightedLls {
  // y ~ a + b x, weights w.
  double a = 0, b = 0, rms = 0;
};

WeightedLls solve_lls(std::span<const double> x, std::span<const double> y,
                      std::span<const double> w) {
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
    swxx += w[i] * x[i] * x[i];
    swxy += w[i] * x[i] * y[i];
  }
  const double det = sw * swxx - swx * swx;
  if (!(det > 0) || !(sw > 0)) throw ValidationError("fit: degenerate design (all X equal)");
  WeightedLls out;
  out.b = (sw * swxy - swx * swy) / det;
  out.a = (swy - out.b * swx) / sw;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (out.a + out.b * x[i]);
    ss += w[i] * r * r;
  }
  out.rms = std::sqrt(ss / sw);
  return out;
}

void check_fit_points(std::span<const RatioPoint> points) {
  if (points.size() < 3) throw ValidationError("fit: need at least 3 points");
  std::set<std::int64_t> xs;
  for (const RatioPoint& p : points) {
    if (p.X < 1) throw ValidationError("fit: window start must be >= 1");
    if (!(p.value > 0.0) || !(p.value < 1.0))
      throw ValidationError("fit: ratio values must lie in (0,1)");
    xs.insert(p.X);
  }
  if (xs.size() < 2) throw ValidationError("fit: degenerate design (all X equal)");
}

}  // namespace

RatioPoint moving_theta(const Dataset& data, int n, std::int64_t X, std::int64_t N) {
  require_window(X, N);
  const auto [first, last] = data.window(X, N);
  if (first == last)
    throw ValidationError("moving_theta: empty window (" + std::to_string(X) + "," +
                          std::to_string(X + N) + "]");
  std::int64_t hits = 0;
  for (std::size_t i = first; i < last; ++i)
    if (data.rows()[i].selmer_rank == n) ++hits;
  const auto total = static_cast<std::int64_t>(last - first);
  return {X, N, static_cast<double>(hits) / static_cast<double>(total), total};
}

RatioPoint moving_rho(const Dataset& data, int n, std::int64_t X, std::int64_t N) {
  require_window(X, N);
  if (n < 2) throw ValidationError("moving_rho: need selmer rank n >= 2");
  const auto [first, last] = data.window(X, N);
  const int parity = n % 2;
  std::int64_t count = 0, mw_sum = 0;
  for (std::size_t i = first; i < last; ++i) {
    const CurveRecord& r = data.rows()[i];
    if (r.selmer_rank != n) continue;
    ++count;
    mw_sum += r.rank - parity;
  }
  if (count == 0)
    throw ValidationError("moving_rho: no curves of selmer rank " + std::to_string(n) +
                          " in window");
  const double den = static_cast<double>(n - parity) * static_cast<double>(count);
  return {X, N, static_cast<double>(mw_sum) / den, count};
}

double estimate_cov11(const Dataset& data, int n, std::int64_t X, std::int64_t N,
                      std::int64_t min_samples) {
  if (n != 4 && n != 5) throw ValidationError("estimate_cov11: defined for n = 4, 5");
  const RatioPoint rho_hat = moving_rho(data, n, X, N);
  if (rho_hat.sample_count < min_samples)
    throw ValidationError("estimate_cov11: only " + std::to_string(rho_hat.sample_count) +
                          " samples, need " + std::to_string(min_samples));
  const auto [first, last] = data.window(X, N);
  std::int64_t full = 0, count = 0;
  for (std::size_t i = first; i < last; ++i) {
    const CurveRecord& r = data.rows()[i];
    if (r.selmer_rank != n) continue;
    ++count;
    if (r.rank == n) ++full;
  }
  const double frac = static_cast<double>(full) / static_cast<double>(count);
  return frac - rho_hat.value * rho_hat.value;
}

double average_rank(const Dataset& data, std::int64_t X, std::optional<int> restrict_n) {
  const std::size_t end = data.upper_bound_height(X);
  if (end == 0) throw ValidationError("average_rank: no records with height <= X");
  double num = 0;
  for (std::size_t i = 0; i < end; ++i) {
    const CurveRecord& r = data.rows()[i];
    if (restrict_n && r.selmer_rank != *restrict_n) continue;
    num += r.rank;
  }
  return num / static_cast<double>(end);
}

double average_selmer_rank(const Dataset& data, std::int64_t X) {
  const std::size_t end = data.upper_bound_height(X);
  if (end == 0) throw ValidationError("average_selmer_rank: no records with height <= X");
  double num = 0;
  for (std::size_t i = 0; i < end; ++i) num += data.rows()[i].selmer_rank;
  return num / static_cast<double>(end);
}

PowerFit fit_rho(std::span<const RatioPoint> points, int n) {
  (void)n;
  check_fit_points(points);
  std::vector<double> x, y, w;
  for (const RatioPoint& p : points) {
    x.push_back(std::log(static_cast<double>(p.X)));
    y.push_back(std::log(p.value));
    w.push_back(p.sample_count > 0 ? static_cast<double>(p.sample_count) : 1.0);
  }
  const WeightedLls lls = solve_lls(x, y, w);
  PowerFit out;
  out.D = std::exp(lls.a);
  out.f = -lls.b;
  out.residual = lls.rms;
  out.point_count = static_cast<int>(points.size());
  return out;
}

ThetaFit fit_theta(std::span<const RatioPoint> points, int n, double s_n) {
  (void)n;
  check_fit_points(points);
  if (!(s_n > 0.0 && s_n < 1.0)) throw ValidationError("fit_theta: s_n must lie in (0,1)");

  int above = 0, below = 0;
  for (const RatioPoint& p : points) {
    if (p.value > s_n) ++above;
    if (p.value < s_n) ++below;
  }
  if (above > 0 && below > 0)
    throw ValidationError("fit_theta: points straddle s_n; single-sign C cannot fit both");
  if (above + below < static_cast<int>(points.size()))
    throw ValidationError("fit_theta: a point equals s_n exactly; log-linearization undefined");
  const double sign = above > 0 ? -1.0 : 1.0;  // theta > s_n exactly when C < 0

  std::vector<double> x, y, w;
  for (const RatioPoint& p : points) {
    x.push_back(std::log(static_cast<double>(p.X)));
    y.push_back(std::log(std::fabs(s_n / p.value - 1.0)));
    w.push_back(p.sample_count > 0 ? static_cast<double>(p.sample_count) : 1.0);
  }
  const WeightedLls lls = solve_lls(x, y, w);
  double C = sign * std::exp(lls.a);
  double e = -lls.b;

  // One Gauss-Newton step on v = s/(1 + C X^-e).
  {
    double jcc = 0, jce = 0, jee = 0, gc = 0, ge = 0;
    bool usable = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto X = static_cast<double>(points[i].X);
      const double p = std::pow(X, -e);
      const double q = 1.0 + C * p;
      if (q <= 0.0) {
        usable = false;
        break;
      }
      const double model = s_n / q;
      const double r = points[i].value - model;
      const double dc = -s_n * p / (q * q);
      const double de = s_n * C * p * std::log(X) / (q * q);
      jcc += w[i] * dc * dc;
      jce += w[i] * dc * de;
      jee += w[i] * de * de;
      gc += w[i] * dc * r;
      ge += w[i] * de * r;
    }
    const double det = jcc * jee - jce * jce;
    if (usable && std::isfinite(det) && std::fabs(det) > 1e-300) {
      const double dC = (jee * gc - jce * ge) / det;
      const double dE = (jcc * ge - jce * gc) / det;
      const double C2 = C + dC, e2 = e + dE;
      // Reject steps that flip the branch or leave the model's domain.
      bool ok = std::isfinite(C2) && std::isfinite(e2) && (sign < 0 ? C2 < 0 : C2 > 0);
      for (std::size_t i = 0; ok && i < points.size(); ++i)
        if (1.0 + C2 * std::pow(static_cast<double>(points[i].X), -e2) <= 0.0) ok = false;
      if (ok) {
        C = C2;
        e = e2;
      }
    }
  }

  ThetaFit out;
  out.C = C;
  out.e = e;
  double ss = 0, sw = 0;
  const double logc = std::log(std::fabs(C));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double r = y[i] - (logc - e * x[i]);
    ss += w[i] * r * r;
    sw += w[i];
  }
  out.residual = std::sqrt(ss / sw);
  out.point_count = static_cast<int>(points.size());
  return out;
}

}  // namespace ranklab
