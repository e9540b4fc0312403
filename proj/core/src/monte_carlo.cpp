#include "mwk/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace mwk {

void RunningStats::add(double x) {
  ++n_;
  if (x != 0.0) ++nonzero_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double delta = other.mean_ - mean_;
  const double n = na + nb;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
  nonzero_ += other.nonzero_;
}

double RunningStats::variance() const {
  return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

double RunningStats::std_error() const {
  return n_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

std::size_t worker_count() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MWK_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) hw = std::min<std::size_t>(hw, static_cast<std::size_t>(cap));
    } catch (...) {
      // ignore malformed values
    }
  }
  return hw;
}

Engine partition_engine(std::uint64_t seed, std::size_t partition) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(partition),
                    0x6d776bu};
  return Engine(seq);
}

Eigen::VectorXd sample_uniform_sphere(Engine& rng, int d) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd x(d);
  double n = 0.0;
  do {
    for (int i = 0; i < d; ++i) x[i] = normal(rng);
    n = x.norm();
  } while (n < 1e-300);
  return x / n;
}

}  // namespace mwk
