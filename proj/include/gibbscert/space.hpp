#pragma once

#include <variant>
#include <vector>

#include "gibbscert/quadrature.hpp"

namespace gibbscert {

enum class SpaceKind { finite, truncated_countable, real_1d };

// Finite point set with counting-measure weights (strictly positive).
struct FiniteSpace {
  std::vector<double> points;
  std::vector<double> weights;
};

// Support {0, 1, ..., n_max} truncating a countable space; tail_bound is a
// certified upper bound on the stationary mass beyond n_max.
struct TruncatedCountableSpace {
  int n_max;
  double tail_bound;
};

// One-dimensional real domain [lo, hi] carrying a fixed quadrature rule.
// `unbounded` marks a truncation of an infinite domain (half-line or line):
// grid infima on such a space do not certify infima over the full domain.
struct Real1DSpace {
  QuadratureRule quad;
  double lo;
  double hi;
  bool unbounded;
};

class SpaceRepr {
 public:
  static SpaceRepr finite(std::vector<double> points, std::vector<double> weights);
  static SpaceRepr truncated_countable(int n_max, double tail_bound);
  static SpaceRepr real_1d(QuadratureRule quad, double lo, double hi, bool unbounded);

  SpaceKind kind() const;
  const FiniteSpace& as_finite() const;
  const TruncatedCountableSpace& as_truncated() const;
  const Real1DSpace& as_real() const;

  // Points at which grid infima/suprema and sums are evaluated:
  // finite points, {0..n_max}, or the quadrature nodes.
  std::vector<double> grid() const;

  std::size_t size() const;

  bool is_unbounded() const;

  // Membership of a point in the represented space (exact match for discrete
  // spaces, interval containment for real ones).
  bool contains(double p) const;

 private:
  explicit SpaceRepr(std::variant<FiniteSpace, TruncatedCountableSpace, Real1DSpace> v)
      : repr_(std::move(v)) {}
  std::variant<FiniteSpace, TruncatedCountableSpace, Real1DSpace> repr_;
};

}  // namespace gibbscert
