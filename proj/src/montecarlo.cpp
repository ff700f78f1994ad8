#include "ecfb/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ecfb/channel.hpp"
#include "ecfb/errors.hpp"
#include "ecfb/parallel.hpp"

namespace ecfb {

std::uint64_t derive_shard_seed(std::uint64_t seed, std::uint64_t shard) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (shard + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform_open01(std::uint64_t word) {
  return (static_cast<double>(word >> 12) + 0.5) * 0x1.0p-52;
}

namespace {

// Welford accumulator; merged with Chan's pairwise update.
struct Moments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double first = 0.0;
  bool all_equal = true;

  void add(double x) {
    if (count == 0) first = x;
    all_equal = all_equal && x == first;
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const Moments& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double n_a = static_cast<double>(count);
    const double n_b = static_cast<double>(other.count);
    const double n = n_a + n_b;
    const double delta = other.mean - mean;
    all_equal = all_equal && other.all_equal && other.first == first;
    mean += delta * n_b / n;
    m2 += other.m2 + delta * delta * n_a * n_b / n;
    count += other.count;
  }
};

}  // namespace

MonteCarloResult ec_monte_carlo(double sinr, double theta, double epsilon, int blocklength,
                                std::uint64_t samples, std::uint64_t seed, ShardPlan plan) {
  if (!(sinr > 0.0)) throw DomainError("ec_monte_carlo: sinr must be > 0");
  if (!(theta > 0.0)) throw DomainError("ec_monte_carlo: theta must be > 0");
  if (blocklength < 1) throw DomainError("ec_monte_carlo: blocklength must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("ec_monte_carlo: epsilon must lie in (0, 1)");
  }
  if (samples < 1000) throw DomainError("ec_monte_carlo: samples must be >= 1000");
  if (plan.shards < 1) throw DomainError("ec_monte_carlo: shard count must be >= 1");

  const double q_inv = gaussian_q_inv(epsilon);
  const double scale = theta * blocklength;
  const std::uint64_t shards = plan.shards;

  std::vector<Moments> per_shard(shards);
  parallel_for_ordered(shards, std::max(1U, plan.jobs), [&](std::size_t k) {
    const std::uint64_t count = samples / shards + (k < samples % shards ? 1 : 0);
    std::mt19937_64 engine(derive_shard_seed(seed, k));
    Moments m;
    for (std::uint64_t i = 0; i < count; ++i) {
      const double z = -std::log(uniform_open01(engine()));
      const double r = fb_rate_with_qinv(sinr, z, blocklength, q_inv);
      m.add(epsilon + (1.0 - epsilon) * std::exp(-scale * r));
    }
    per_shard[k] = m;
  });

  Moments total;
  for (const auto& m : per_shard) total.merge(m);

  MonteCarloResult out;
  out.estimate.mean = total.mean;
  out.estimate.samples = total.count;
  out.estimate.seed = seed;
  out.estimate.degenerate = total.all_equal;
  const double variance = total.count > 1 ? total.m2 / static_cast<double>(total.count - 1) : 0.0;
  out.estimate.std_error = std::sqrt(variance / static_cast<double>(total.count));

  out.evaluation.epsilon = epsilon;
  out.evaluation.method = EcMethod::monte_carlo(samples, seed);
  out.evaluation.inner_expectation = total.mean;
  out.evaluation.error_estimate = out.estimate.std_error;
  out.evaluation.ec = -std::log(total.mean) / scale;
  return out;
}

}  // namespace ecfb
