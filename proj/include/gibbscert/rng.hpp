#pragma once

#include <cstdint>
#include <random>

namespace gibbscert {

// Deterministic 64-bit-seeded generator (mt19937_64) with explicit sampling
// routines, so a fixed seed reproduces every stream bit-for-bit on one build.
// Parallel chains derive their stream as seed ^ chain_index.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed), has_cached_normal_(false) {}

  std::uint64_t seed() const { return seed_; }

  // Uniform on the open interval (0, 1): (k + 1/2) * 2^-53 with k the top 53 bits.
  double uniform() {
    const std::uint64_t bits = engine_();
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the second deviate is cached.
  double normal();

  double exponential(double rate = 1.0);

  // Gamma with integer shape (sum of exponentials) and the given rate.
  double gamma_int(int shape, double rate);

  // Beta(a, b) for integer a, b >= 1.
  double beta_int(int a, int b);

  int poisson(double lambda);

  int binomial(int n, double p);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_cached_normal_;
  double cached_normal_ = 0.0;
};

}  // namespace gibbscert
