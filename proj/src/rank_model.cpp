#include "ranklab/rank_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "ranklab/constants.hpp"
#include "ranklab/errors.hpp"

namespace ranklab {
namespace {

void require_selmer_rank(int n, int lo) {
  if (n < lo || n > kModeledSelmerMax)
    throw ValidationError("selmer rank " + std::to_string(n) + " outside modeled range [" +
                          std::to_string(lo) + ",5]");
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

}  // namespace

ModelParams ModelParams::paper_defaults() {
  ModelParams p;
  for (int n = 0; n <= kModeledSelmerMax; ++n) p.s[n] = poonen_rains_s(n);
  p.theta_coeff[1] = {-0.40116957, 0.08540201};
  p.theta_coeff[2] = {1.41108621, 0.12348659};
  p.theta_coeff[3] = {11.18222736, 0.14061542};
  p.theta_coeff[4] = {179.71749981, 0.20339670};
  p.theta_coeff[5] = {95474.85098037, 0.39937065};
  p.rho_coeff[2] = {1.12465347, 0.02344245};
  p.rho_coeff[3] = {1.30937016, 0.04412662};
  p.rho_coeff[4] = {1.07928016, 0.02158211};
  p.rho_coeff[5] = {1.79161787, 0.04383626};
  p.cov11[2] = 0.0;
  p.cov11[3] = 0.0;
  p.cov11[4] = -0.025;
  p.cov11[5] = 0.0;
  return p;
}

void ModelParams::validate() const {
  for (int n = 0; n <= kModeledSelmerMax; ++n) {
    if (!std::isfinite(s[n]) || s[n] < 0.0 || s[n] > 1.0)
      throw ValidationError("ModelParams: s_" + std::to_string(n) + " outside [0,1]");
  }
  for (int n = 1; n <= kModeledSelmerMax; ++n) {
    if (!std::isfinite(theta_coeff[n].C) || !std::isfinite(theta_coeff[n].e) ||
        theta_coeff[n].e < 0.0)
      throw ValidationError("ModelParams: bad theta coefficients for n=" + std::to_string(n));
  }
  for (int n = 2; n <= kModeledSelmerMax; ++n) {
    if (!std::isfinite(rho_coeff[n].D) || rho_coeff[n].D < 0.0 ||
        !std::isfinite(rho_coeff[n].f) || rho_coeff[n].f < 0.0)
      throw ValidationError("ModelParams: bad rho coefficients for n=" + std::to_string(n));
    if (!std::isfinite(cov11[n]) || std::fabs(cov11[n]) > 1.0)
      throw ValidationError("ModelParams: |cov11| > 1 for n=" + std::to_string(n));
  }
}

std::uint64_t ModelParams::hash() const {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  auto feed = [&h](double v) {
    std::uint64_t bits;
    static_assert(sizeof bits == sizeof v);
    std::memcpy(&bits, &v, sizeof bits);
    h = mix64(h ^ bits);
  };
  for (double v : s) feed(v);
  for (const auto& t : theta_coeff) {
    feed(t.C);
    feed(t.e);
  }
  for (const auto& r : rho_coeff) {
    feed(r.D);
    feed(r.f);
  }
  for (double v : cov11) feed(v);
  return h;
}

CovarianceTable CovarianceTable::from_params(const ModelParams& p) {
  CovarianceTable t;
  for (int n = 4; n <= kModeledSelmerMax; ++n) t.set(n, 1, 1, p.cov11[n]);
  return t;
}

void CovarianceTable::set(int n, int s, int t, double value) {
  if (s < 1 || t < 1 || s + t > n / 2)
    throw ValidationError("CovarianceTable: key (" + std::to_string(n) + "," + std::to_string(s) +
                          "," + std::to_string(t) + ") outside s,t >= 1, s+t <= floor(n/2)");
  if (std::fabs(value) > 1.0) throw ValidationError("CovarianceTable: |C| > 1");
  entries_[{n, s, t}] = value;
}

double CovarianceTable::get(int n, int s, int t) const {
  const auto it = entries_.find({n, s, t});
  if (it == entries_.end())
    throw ValidationError("CovarianceTable: missing entry (" + std::to_string(n) + "," +
                          std::to_string(s) + "," + std::to_string(t) + ")");
  return it->second;
}

double theta(int n, double X, const ModelParams& p, bool* clamp_event) {
  require_selmer_rank(n, 1);
  if (!(X >= 1.0)) throw ValidationError("theta: X must be >= 1");
  const auto& c = p.theta_coeff[n];
  const double den = 1.0 + c.C * std::pow(X, -c.e);
  if (den <= 0.0) throw ValidationError("theta: nonpositive denominator at n=" + std::to_string(n));
  const double raw = p.s[n] / den;
  const double v = std::clamp(raw, 0.0, 1.0);
  if (clamp_event) *clamp_event = (v != raw);
  return v;
}

double theta_zero(double X, const ModelParams& p) {
  double sum = 0.0;
  for (int n = 1; n <= kModeledSelmerMax; ++n) sum += theta(n, X, p);
  const double residual = 1.0 - sum;
  if (residual < -1e-12)
    throw ValidationError("theta_zero: modeled Selmer masses exceed 1 at X=" + std::to_string(X));
  return std::max(residual, 0.0);
}

double rho(int n, double X, const ModelParams& p, bool* clamp_event) {
  require_selmer_rank(n, 2);
  if (!(X >= 1.0)) throw ValidationError("rho: X must be >= 1");
  const auto& c = p.rho_coeff[n];
  const double raw = c.D * std::pow(X, -c.f);
  if (clamp_event) *clamp_event = raw > 1.0;
  return std::min(raw, 1.0);
}

double expected_product(int n, int s, int t, double rho_value, const CovarianceTable& cov) {
  require_selmer_rank(n, 1);
  if (s < 0 || t < 0 || s + t > n / 2)
    throw ValidationError("expected_product: need s,t >= 0 and s+t <= floor(n/2)");

  // E_{s,0}
  double es0 = 1.0;
  for (int k = 1; k <= s; ++k) {
    es0 = es0 * rho_value + (k >= 2 ? cov.get(n, k - 1, 1) : 0.0);
  }
  if (t == 0) return es0;

  // E_{0,t}
  double e0t = 1.0;
  for (int k = 1; k <= t; ++k) {
    double covsum = 0.0;
    for (int i = 1; i <= k - 1; ++i) {
      const double sign = (i % 2 == 0) ? 1.0 : -1.0;
      covsum += sign * binom(k - 1, i) * cov.get(n, 1, i);
    }
    e0t = e0t * (1.0 - rho_value) - covsum;
  }
  if (s == 0) return e0t;

  double covsum = 0.0;
  for (int i = 1; i <= t; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    covsum += sign * binom(t, i) * cov.get(n, s, i);
  }
  return es0 * e0t + covsum;
}

JointBernoulliPair joint_bernoulli_pair(double rho_value, double c) {
  if (!(rho_value >= 0.0 && rho_value <= 1.0))
    throw ValidationError("joint_bernoulli_pair: rho outside [0,1]");
  const double q = 1.0 - rho_value;
  const double lo = -std::min(rho_value * rho_value, q * q);
  const double hi = rho_value * q;
  JointBernoulliPair jp;
  const double cc = std::clamp(c, lo, hi);
  jp.clamped = (cc != c);
  jp.p11 = std::max(rho_value * rho_value + cc, 0.0);
  jp.p10 = std::max(hi - cc, 0.0);
  jp.p01 = jp.p10;
  jp.p00 = std::max(q * q + cc, 0.0);
  return jp;
}

RankDistribution rank_distribution_given_rho(int n, double rho_value, double cov) {
  require_selmer_rank(n, 1);
  RankDistribution d;
  if (n == 1) {
    d.p[1] = 1.0;
    return d;
  }
  if (n <= 3) {
    d.p[n] = rho_value;
    d.p[n - 2] = 1.0 - rho_value;
    return d;
  }
  const JointBernoulliPair jp = joint_bernoulli_pair(rho_value, cov);
  d.p[n] = jp.p11;
  d.p[n - 2] = jp.p10 + jp.p01;
  d.p[n - 4] = jp.p00;
  d.clamped = jp.clamped;
  return d;
}

RankDistribution rank_distribution(int n, double X, const ModelParams& p) {
  require_selmer_rank(n, 1);
  if (n == 1) return rank_distribution_given_rho(1, 0.0, 0.0);
  bool rho_clamped = false;
  const double r = rho(n, X, p, &rho_clamped);
  RankDistribution d = rank_distribution_given_rho(n, r, n >= 4 ? p.cov11[n] : 0.0);
  d.clamped = d.clamped || rho_clamped;
  return d;
}

double rank_probability(int n, int r, double X, const ModelParams& p) {
  const RankDistribution d = rank_distribution(n, X, p);
  if (r < 0 || r > n) return 0.0;
  return d.p[r];
}

}  // namespace ranklab
