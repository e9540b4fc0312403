#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace mwk {

using Engine = std::mt19937_64;

/// Streaming mean/variance (Welford), mergeable in a fixed order.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);

  std::size_t count() const { return n_; }
  std::size_t nonzero() const { return nonzero_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance; 0 for fewer than two samples.
  double variance() const;
  double std_error() const;

 private:
  std::size_t n_ = 0;
  std::size_t nonzero_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::size_t nonzero = 0;
};

/// Number of fixed RNG partitions. Results depend on (seed, n, partitions)
/// only, never on how many workers execute them.
inline constexpr std::size_t kDefaultPartitions = 16;

/// Worker cap from MWK_THREADS (default: hardware concurrency).
std::size_t worker_count();

/// Engine for one partition, seeded from (seed, partition).
Engine partition_engine(std::uint64_t seed, std::size_t partition);

/// Uniform point on S^{d-1} from a normalized Gaussian vector.
Eigen::VectorXd sample_uniform_sphere(Engine& rng, int d);

/// Runs `sample(engine)` n times split across `partitions` fixed RNG
/// streams. `sample` must be safe to call concurrently with distinct engines.
template <class SampleFn>
McEstimate monte_carlo(std::uint64_t seed, std::size_t n, SampleFn&& sample,
                       std::size_t partitions = kDefaultPartitions) {
  if (partitions == 0) partitions = 1;
  if (partitions > n && n > 0) partitions = n;
  std::vector<RunningStats> parts(partitions);

  auto run_partition = [&](std::size_t p) {
    const std::size_t count = n / partitions + (p < n % partitions ? 1 : 0);
    Engine rng = partition_engine(seed, p);
    RunningStats& stats = parts[p];
    for (std::size_t k = 0; k < count; ++k) stats.add(sample(rng));
  };

  const std::size_t workers = std::min(worker_count(), partitions);
  if (workers <= 1) {
    for (std::size_t p = 0; p < partitions; ++p) run_partition(p);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t p = w; p < partitions; p += workers) run_partition(p);
      });
    }
    for (auto& t : pool) t.join();
  }

  RunningStats total;
  for (const auto& s : parts) total.merge(s);
  return McEstimate{total.mean(), total.std_error(), total.count(),
                    total.nonzero()};
}

}  // namespace mwk
