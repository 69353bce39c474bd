#include "pmiprof/rng.hpp"

#include <cmath>
#include <limits>

#include "pmiprof/mathutil.hpp"

namespace pmiprof {

namespace {

inline std::uint64_t splitmix_fin(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::uint32_t ctr[4], const std::uint32_t key[2]) {
  const std::uint64_t p0 = std::uint64_t(kPhiloxM0) * ctr[0];
  const std::uint64_t p1 = std::uint64_t(kPhiloxM1) * ctr[2];
  const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
  const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
  const std::uint32_t c1 = ctr[1], c3 = ctr[3];
  ctr[0] = hi1 ^ c1 ^ key[0];
  ctr[1] = lo1;
  ctr[2] = hi0 ^ c3 ^ key[1];
  ctr[3] = lo0;
}

}  // namespace

Seed derive(Seed root, const StreamKey& key) {
  // The xor constant keeps derive(0, {}) away from the trivial fixed point.
  std::uint64_t h = splitmix_fin(root ^ 0x243F6A8885A308D3ull);
  for (const auto& [label, index] : key.path) {
    h = splitmix_fin(h ^ fnv1a64(label));
    h = splitmix_fin(h ^ index);
  }
  return h;
}

Seed derive(Seed root, const std::string& label, std::uint64_t index) {
  StreamKey k;
  k.push(label, index);
  return derive(root, k);
}

Rng::Rng(Seed seed) : pos_(4) {
  key_[0] = std::uint32_t(seed);
  key_[1] = std::uint32_t(seed >> 32);
  counter_[0] = counter_[1] = counter_[2] = counter_[3] = 0;
}

void Rng::refill() {
  std::uint32_t ctr[4] = {counter_[0], counter_[1], counter_[2], counter_[3]};
  std::uint32_t key[2] = {key_[0], key_[1]};
  for (int r = 0; r < 10; ++r) {
    if (r) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    philox_round(ctr, key);
  }
  buf_[0] = ctr[0];
  buf_[1] = ctr[1];
  buf_[2] = ctr[2];
  buf_[3] = ctr[3];
  pos_ = 0;
  // 128-bit counter increment
  for (int i = 0; i < 4; ++i) {
    if (++counter_[i] != 0) break;
  }
}

std::uint32_t Rng::next_u32() {
  if (pos_ >= 4) refill();
  return buf_[pos_++];
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double Rng::uniform() {
  return double(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  // uniform() is in [0, 1); shift to (0, 1) for the quantile.
  double u = uniform();
  if (u <= 0.0) u = 0x1.0p-53;
  return normal_quantile(u);
}

double Rng::normal(double mean, double sd) { return mean + sd * normal(); }

double Rng::exponential(double rate) {
  double u = uniform();
  return -std::log1p(-u) / rate;
}

double Rng::gamma(double shape, double scale) {
  if (shape <= 0.0 || scale <= 0.0) throw NumericError("gamma: shape and scale must be positive");
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0, 1.0);
    double u = uniform();
    if (u <= 0.0) u = 0x1.0p-53;
    return scale * g * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return scale * d * v;
  }
}

double Rng::chi_squared(double dof) { return gamma(0.5 * dof, 2.0); }

long Rng::poisson(double mean) {
  if (mean < 0.0) throw NumericError("poisson: negative mean");
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    // inversion by sequential search
    const double l = std::exp(-mean);
    long k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > l);
    return k - 1;
  }
  // PTRS transformed rejection (Hormann 1993)
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    double u = uniform() - 0.5;
    double v = uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return long(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        k * std::log(mean) - mean - std::lgamma(k + 1.0)) {
      return long(k);
    }
  }
}

int Rng::categorical(const std::vector<double>& weights) {
  if (weights.empty()) throw NumericError("categorical: empty weights");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw NumericError("categorical: negative or NaN weight");
    total += w;
  }
  if (total <= 0.0) throw NumericError("categorical: weights sum to zero");
  double target = uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    acc += weights[i];
    if (target < acc) return int(i);
  }
  return int(weights.size()) - 1;
}

void Rng::shuffle(std::vector<int>& idx) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = std::size_t(next_u64() % i);
    std::swap(idx[i - 1], idx[j]);
  }
}

Vector standard_normal(Seed seed, Eigen::Index n) {
  if (n < 0) throw NumericError("standard_normal: n must be >= 0");
  Rng rng(seed);
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = rng.normal();
  return out;
}

}  // namespace pmiprof
