#pragma once

#include <cstdint>

#include "ecfb/effective_capacity.hpp"

namespace ecfb {

/// Sample statistics of the inner expectation E[eps + (1-eps) e^{-theta T r}].
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  /// Every sample was identical, so std_error carries no information.
  bool degenerate = false;
};

struct MonteCarloResult {
  EcEvaluation evaluation;
  McEstimate estimate;
};

/// Splits a run into fixed shards; shard k draws from its own generator
/// seeded with derive_shard_seed(seed, k) and shards are recombined in
/// index order. The result depends on the shard count, never on jobs.
struct ShardPlan {
  unsigned shards = 1;
  unsigned jobs = 1;
};

/// SplitMix64 finalizer applied to (seed, shard).
std::uint64_t derive_shard_seed(std::uint64_t seed, std::uint64_t shard);

/// Maps a 64-bit word to a uniform double in (0, 1) using its top 52 bits.
double uniform_open01(std::uint64_t word);

MonteCarloResult ec_monte_carlo(double sinr, double theta, double epsilon, int blocklength,
                                std::uint64_t samples, std::uint64_t seed, ShardPlan plan = {});

}  // namespace ecfb
