#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pmiprof/common.hpp"

namespace pmiprof {

// 64-bit root seed. Identical seeds reproduce identical sample streams
// bit-for-bit on the same build.
using Seed = std::uint64_t;

// Hierarchical sub-stream identifier: an ordered list of (label, index)
// pairs, e.g. {("task", 3), ("seed", 0), ("estimator", 1)}. Derivation is
// order-sensitive and distinct paths give statistically independent streams.
struct StreamKey {
  std::vector<std::pair<std::string, std::uint64_t>> path;

  StreamKey() = default;
  StreamKey(std::initializer_list<std::pair<std::string, std::uint64_t>> p) : path(p) {}

  StreamKey& push(const std::string& label, std::uint64_t index) {
    path.emplace_back(label, index);
    return *this;
  }
};

// Deterministic seed derivation: splitmix64-style finalizer chained over the
// FNV-1a hash of each label and the index. derive(0, {}) is pinned by a
// golden test.
Seed derive(Seed root, const StreamKey& key);

// Convenience for the common single-level case.
Seed derive(Seed root, const std::string& label, std::uint64_t index);

// Counter-based Philox4x32-10 stream. Value semantics; no shared state, so
// streams derived from distinct keys can run on different threads.
class Rng {
 public:
  explicit Rng(Seed seed);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal via the AS241 inverse-CDF applied to one uniform draw.
  double normal();
  double normal(double mean, double sd);

  double exponential(double rate = 1.0);

  // Marsaglia-Tsang for shape >= 1, boosted for shape < 1. scale = theta.
  double gamma(double shape, double scale = 1.0);
  double chi_squared(double dof);

  // Inversion below mean 10, PTRS rejection above.
  long poisson(double mean);

  // CDF inversion over the (non-negative, not necessarily normalized) weights.
  int categorical(const std::vector<double>& weights);

  // In-place Fisher-Yates.
  void shuffle(std::vector<int>& idx);

 private:
  void refill();

  std::uint32_t key_[2];
  std::uint32_t counter_[4];
  std::uint32_t buf_[4];
  int pos_;
};

// n i.i.d. standard normal variates from a fresh stream.
Vector standard_normal(Seed seed, Eigen::Index n);

}  // namespace pmiprof
