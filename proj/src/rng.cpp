#include "gibbscert/rng.hpp"

#include <cmath>

#include "gibbscert/errors.hpp"

namespace gibbscert {

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  // Box-Muller; uniform() never returns 0 or 1, so the log is safe.
  double u1 = uniform();
  double u2 = uniform();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 6.283185307179586476925286766559 * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_normal_ = true;
  return radius * std::cos(angle);
}

double Rng::exponential(double rate) {
  if (!(rate > 0.0)) throw domain_error("exponential: rate must be positive");
  return -std::log(uniform()) / rate;
}

double Rng::gamma_int(int shape, double rate) {
  if (shape < 1) throw domain_error("gamma_int: shape must be >= 1");
  double sum = 0.0;
  for (int i = 0; i < shape; ++i) sum += exponential(rate);
  return sum;
}

double Rng::beta_int(int a, int b) {
  double ga = gamma_int(a, 1.0);
  double gb = gamma_int(b, 1.0);
  return ga / (ga + gb);
}

int Rng::poisson(double mean) {
  if (!(mean >= 0.0)) throw domain_error("poisson: mean must be >= 0");
  if (mean == 0.0) return 0;
  // Knuth's product-of-uniforms method; exp(-mean) stays normal for the
  // means this toolkit produces (posterior means are a few hundred at most).
  double threshold = std::exp(-mean);
  if (threshold == 0.0)
    throw domain_error("poisson: mean too large for the exact sampler");
  int k = 0;
  double prod = uniform();
  while (prod > threshold) {
    ++k;
    prod *= uniform();
  }
  return k;
}

int Rng::binomial(int n, double p) {
  if (n < 0) throw domain_error("binomial: n must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw domain_error("binomial: p outside [0,1]");
  int count = 0;
  for (int i = 0; i < n; ++i)
    if (uniform() < p) ++count;
  return count;
}

}  // namespace gibbscert
