#include "ranklab/simulator.hpp"

#include <cmath>
#include <sstream>
#include <thread>

#include "ranklab/constants.hpp"
#include "ranklab/errors.hpp"

namespace ranklab {
namespace {

// Draw channels per (height, curve) counter key.
constexpr std::uint64_t kDrawHeightCount = 0;
constexpr std::uint64_t kDrawSelmer = 1;
constexpr std::uint64_t kDrawSymbols = 2;

// Per-height model evaluations shared by every curve at that height.
struct HeightTable {
  std::int64_t height = -1;
  double cum[7] = {};  // cumulative mass after n = 0..5
  double rho_n[6] = {};
};

HeightTable build_height_table(std::int64_t X, const ModelParams& params) {
  HeightTable t;
  t.height = X;
  const auto Xd = static_cast<double>(X);
  double acc = theta_zero(Xd, params);
  t.cum[1] = acc;
  for (int n = 1; n <= kModeledSelmerMax; ++n) {
    acc += theta(n, Xd, params);
    t.cum[n + 1] = acc;
  }
  for (int n = 2; n <= kModeledSelmerMax; ++n) t.rho_n[n] = rho(n, Xd, params);
  return t;
}

TestCurve sample_with_table(const HeightTable& t, std::uint64_t curve_index, const StreamRng& rng,
                            const ModelParams& params) {
  TestCurve c;
  c.height = t.height;
  const auto h = static_cast<std::uint64_t>(t.height);

  const double u = rng.uniform(h, curve_index, kDrawSelmer);
  int n = 0;
  while (n < kModeledSelmerMax && u >= t.cum[n + 1]) ++n;
  c.selmer_rank = n;

  if (n >= 2) {
    const double v = rng.uniform(h, curve_index, kDrawSymbols);
    if (n <= 3) {
      c.symbols.push_back(v < t.rho_n[n] ? Symbol::kMw : Symbol::kSha);
    } else {
      const JointBernoulliPair jp = joint_bernoulli_pair(t.rho_n[n], params.cov11[n]);
      if (v < jp.p11) {
        c.symbols = {Symbol::kMw, Symbol::kMw};
      } else if (v < jp.p11 + jp.p10) {
        c.symbols = {Symbol::kMw, Symbol::kSha};
      } else if (v < jp.p11 + jp.p10 + jp.p01) {
        c.symbols = {Symbol::kSha, Symbol::kMw};
      } else {
        c.symbols = {Symbol::kSha, Symbol::kSha};
      }
    }
  }
  return c;
}

// Smallest h with deterministic_prefix_count(h) >= k, given a lower hint.
std::int64_t height_for_index(std::int64_t k, std::int64_t hint) {
  const double est = std::pow(static_cast<double>(k) / brumer_kappa(), 1.2);
  auto h = std::max<std::int64_t>(1, std::max(hint, static_cast<std::int64_t>(est) - 2));
  while (deterministic_prefix_count(h) < k) ++h;
  while (h > 1 && deterministic_prefix_count(h - 1) >= k) --h;
  return h;
}

CurveRecord to_record(const TestCurve& c) {
  return {c.height, static_cast<std::int32_t>(c.selmer_rank),
          static_cast<std::int32_t>(rank_of(c))};
}

}  // namespace

int rank_of(const TestCurve& c) {
  int mw = 0;
  for (Symbol s : c.symbols)
    if (s == Symbol::kMw) ++mw;
  return (c.selmer_rank % 2) + 2 * mw;
}

std::int64_t deterministic_prefix_count(std::int64_t X) {
  if (X <= 0) return 0;
  return static_cast<std::int64_t>(
      std::floor(brumer_kappa() * std::pow(static_cast<double>(X), 5.0 / 6.0)));
}

std::int64_t curves_at_height(std::int64_t X, CountMode mode, const StreamRng& rng) {
  if (X < 1) throw ValidationError("curves_at_height: X must be >= 1");
  if (mode == CountMode::kDeterministic)
    return deterministic_prefix_count(X) - deterministic_prefix_count(X - 1);
  const double p =
      std::min(1.0, five_kappa_sixths() * std::pow(static_cast<double>(X), -1.0 / 6.0));
  return rng.uniform(static_cast<std::uint64_t>(X), 0, kDrawHeightCount) < p ? 1 : 0;
}

TestCurve sample_test_curve(std::int64_t X, std::uint64_t curve_index, const StreamRng& rng,
                            const ModelParams& params) {
  if (X < 1) throw ValidationError("sample_test_curve: X must be >= 1");
  return sample_with_table(build_height_table(X, params), curve_index, rng, params);
}

Dataset simulate_sequence(const SimConfig& config) {
  if (config.max_height < 0) throw ValidationError("simulate_sequence: max_height must be >= 0");
  config.params.validate();
  const StreamRng rng(config.seed);
  const int threads = std::max(1, config.threads);

  std::vector<CurveRecord> rows;

  if (config.mode == CountMode::kDeterministic) {
    const std::int64_t total = deterministic_prefix_count(config.max_height);
    if (total > config.cap)
      throw CapExceededError("simulate_sequence: " + std::to_string(total) +
                                 " curves exceed cap " + std::to_string(config.cap),
                             total);
    rows.resize(static_cast<std::size_t>(total));

    auto worker = [&](std::int64_t k_first, std::int64_t k_last) {
      if (k_first > k_last) return;
      std::int64_t h = height_for_index(k_first, 1);
      std::int64_t below = deterministic_prefix_count(h - 1);
      std::int64_t at = deterministic_prefix_count(h);
      HeightTable table = build_height_table(h, config.params);
      for (std::int64_t k = k_first; k <= k_last; ++k) {
        while (k > at) {
          h = height_for_index(k, h + 1);
          below = deterministic_prefix_count(h - 1);
          at = deterministic_prefix_count(h);
          table = build_height_table(h, config.params);
        }
        const auto idx = static_cast<std::uint64_t>(k - below - 1);
        rows[static_cast<std::size_t>(k - 1)] =
            to_record(sample_with_table(table, idx, rng, config.params));
      }
    };

    if (threads == 1 || total < 4096) {
      worker(1, total);
    } else {
      std::vector<std::thread> pool;
      for (int i = 0; i < threads; ++i) {
        const std::int64_t k_first = total * i / threads + 1;
        const std::int64_t k_last = total * (i + 1) / threads;
        pool.emplace_back(worker, k_first, k_last);
      }
      for (auto& t : pool) t.join();
    }
  } else {
    // At most one curve per height; partition the height range.
    const int nchunks = threads;
    std::vector<std::vector<CurveRecord>> parts(static_cast<std::size_t>(nchunks));
    auto worker = [&](std::int64_t h_first, std::int64_t h_last, std::vector<CurveRecord>& out) {
      for (std::int64_t h = h_first; h <= h_last; ++h) {
        if (curves_at_height(h, CountMode::kBernoulli, rng) == 0) continue;
        out.push_back(to_record(
            sample_with_table(build_height_table(h, config.params), 0, rng, config.params)));
      }
    };
    if (nchunks == 1) {
      worker(1, config.max_height, parts[0]);
    } else {
      std::vector<std::thread> pool;
      for (int i = 0; i < nchunks; ++i) {
        const std::int64_t h_first = config.max_height * i / nchunks + 1;
        const std::int64_t h_last = config.max_height * (i + 1) / nchunks;
        pool.emplace_back(worker, h_first, h_last, std::ref(parts[static_cast<std::size_t>(i)]));
      }
      for (auto& t : pool) t.join();
    }
    for (auto& part : parts) rows.insert(rows.end(), part.begin(), part.end());
    if (static_cast<std::int64_t>(rows.size()) > config.cap)
      throw CapExceededError("simulate_sequence: generated " + std::to_string(rows.size()) +
                                 " curves, cap is " + std::to_string(config.cap),
                             static_cast<std::int64_t>(rows.size()));
  }

  return Dataset(std::move(rows));
}

std::string simulation_metadata_json(const SimConfig& config) {
  std::ostringstream os;
  os << "{\"seed\":" << config.seed << ",\"max_height\":" << config.max_height
     << ",\"params_hash\":\"" << std::hex << config.params.hash() << std::dec << "\""
     << ",\"count_mode\":\""
     << (config.mode == CountMode::kDeterministic ? "deterministic" : "bernoulli") << "\""
     << ",\"nmax_modeled\":" << kModeledSelmerMax << "}";
  return os.str();
}

}  // namespace ranklab
