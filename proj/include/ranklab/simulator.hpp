#pragma once

#include <cstdint>
#include <vector>

#include "ranklab/dataset.hpp"
#include "ranklab/rank_model.hpp"
#include "ranklab/rng.hpp"

namespace ranklab {

enum class CountMode { kDeterministic, kBernoulli };

enum class Symbol : std::uint8_t { kMw, kSha };

// Abstract curve: height, Selmer rank, and floor(n/2) MW/Sha symbols.
struct TestCurve {
  std::int64_t height = 0;
  int selmer_rank = 0;
  std::vector<Symbol> symbols;
};

// (n mod 2) + 2 * #MW. Same parity as the Selmer rank, bounded by it.
int rank_of(const TestCurve& c);

struct SimConfig {
  std::int64_t max_height = 0;
  std::uint64_t seed = 0;
  ModelParams params;
  CountMode mode = CountMode::kDeterministic;
  std::int64_t cap = 1'000'000'000;
  int threads = 1;
};

// floor(kappa X^(5/6)): cumulative curve count through height X in
// deterministic mode. Differencing it keeps the running total within 1 of
// kappa X^(5/6) at every height.
std::int64_t deterministic_prefix_count(std::int64_t X);

// Curves emitted at exactly height X. Deterministic mode differences the
// prefix; Bernoulli mode draws 0/1 with probability min(1, (5k/6) X^(-1/6)).
std::int64_t curves_at_height(std::int64_t X, CountMode mode, const StreamRng& rng);

// One curve at height X and per-height index `curve_index`: Selmer rank from
// the categorical {theta_0,...,theta_5}, then the symbol draws (single
// Bernoulli(rho_n) for n = 2,3; a correlated pair for n = 4,5).
TestCurve sample_test_curve(std::int64_t X, std::uint64_t curve_index, const StreamRng& rng,
                            const ModelParams& params);

// The full sequence up to max_height as a dataset, ascending height,
// bit-identical for equal (seed, config) and for any thread count.
Dataset simulate_sequence(const SimConfig& config);

// Sidecar metadata JSON for a simulated dataset file.
std::string simulation_metadata_json(const SimConfig& config);

}  // namespace ranklab
