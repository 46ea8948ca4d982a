#include "gibbscert/space.hpp"

#include <cmath>

#include "gibbscert/errors.hpp"

namespace gibbscert {

SpaceRepr SpaceRepr::finite(std::vector<double> points,
                            std::vector<double> weights) {
  if (points.empty()) throw domain_error("finite space: no points");
  if (points.size() != weights.size())
    throw domain_error("finite space: points/weights size mismatch");
  for (double w : weights)
    if (!(w > 0.0)) throw domain_error("finite space: weights must be positive");
  return SpaceRepr(FiniteSpace{std::move(points), std::move(weights)});
}

SpaceRepr SpaceRepr::truncated_countable(int n_max, double tail_bound) {
  if (n_max < 0) throw domain_error("truncated space: n_max must be >= 0");
  if (!(tail_bound >= 0.0 && tail_bound < 1.0))
    throw domain_error("truncated space: tail bound outside [0,1)");
  return SpaceRepr(TruncatedCountableSpace{n_max, tail_bound});
}

SpaceRepr SpaceRepr::real_1d(QuadratureRule quad, double lo, double hi,
                             bool unbounded) {
  if (!(lo < hi)) throw domain_error("real space: empty interval");
  if (quad.nodes.empty()) throw domain_error("real space: empty quadrature");
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    if (!(quad.weights[i] > 0.0))
      throw domain_error("real space: quadrature weights must be positive");
    if (i > 0 && !(quad.nodes[i - 1] < quad.nodes[i]))
      throw domain_error("real space: quadrature nodes must increase");
  }
  return SpaceRepr(Real1DSpace{std::move(quad), lo, hi, unbounded});
}

SpaceKind SpaceRepr::kind() const {
  switch (repr_.index()) {
    case 0: return SpaceKind::finite;
    case 1: return SpaceKind::truncated_countable;
    default: return SpaceKind::real_1d;
  }
}

const FiniteSpace& SpaceRepr::as_finite() const {
  if (kind() != SpaceKind::finite)
    throw domain_error("space is not finite");
  return std::get<FiniteSpace>(repr_);
}

const TruncatedCountableSpace& SpaceRepr::as_truncated() const {
  if (kind() != SpaceKind::truncated_countable)
    throw domain_error("space is not truncated-countable");
  return std::get<TruncatedCountableSpace>(repr_);
}

const Real1DSpace& SpaceRepr::as_real() const {
  if (kind() != SpaceKind::real_1d)
    throw domain_error("space is not real");
  return std::get<Real1DSpace>(repr_);
}

std::vector<double> SpaceRepr::grid() const {
  switch (kind()) {
    case SpaceKind::finite:
      return as_finite().points;
    case SpaceKind::truncated_countable: {
      std::vector<double> g(as_truncated().n_max + 1);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = double(i);
      return g;
    }
    default:
      return as_real().quad.nodes;
  }
}

std::size_t SpaceRepr::size() const {
  switch (kind()) {
    case SpaceKind::finite: return as_finite().points.size();
    case SpaceKind::truncated_countable:
      return std::size_t(as_truncated().n_max) + 1;
    default: return as_real().quad.nodes.size();
  }
}

bool SpaceRepr::is_unbounded() const {
  switch (kind()) {
    case SpaceKind::finite: return false;
    case SpaceKind::truncated_countable: return true;
    default: return as_real().unbounded;
  }
}

bool SpaceRepr::contains(double p) const {
  switch (kind()) {
    case SpaceKind::finite: {
      for (double q : as_finite().points)
        if (std::abs(p - q) <= 1e-12 * std::max(1.0, std::abs(q))) return true;
      return false;
    }
    case SpaceKind::truncated_countable: {
      double r = std::round(p);
      return std::abs(p - r) <= 1e-9 && r >= 0.0 &&
             r <= double(as_truncated().n_max);
    }
    default:
      return p >= as_real().lo && p <= as_real().hi;
  }
}

}  // namespace gibbscert
