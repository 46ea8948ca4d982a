#include "gibbscert/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "gibbscert/errors.hpp"

namespace gibbscert {

// Golub-Welsch: nodes are eigenvalues of the symmetric Jacobi matrix of the
// Legendre recurrence, weights come from the squared first eigenvector
// components.  Exact to machine precision for the sizes used here.
QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw domain_error("gauss_legendre: need at least one node");
  if (!(a < b)) throw domain_error("gauss_legendre: empty interval");

  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double off = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = off;
    jacobi(k - 1, k) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  if (es.info() != Eigen::Success)
    throw numeric_error("gauss_legendre: eigensolver failed", 0.0);

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  double mid = 0.5 * (a + b);
  double half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * es.eigenvalues()(i);
    double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = 2.0 * v0 * v0 * half;
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(const std::vector<double>& breakpoints,
                                        int nodes_per_panel) {
  if (breakpoints.size() < 2)
    throw domain_error("composite_gauss_legendre: need at least one panel");
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i - 1] < breakpoints[i]))
      throw domain_error("composite_gauss_legendre: breakpoints must increase");

  QuadratureRule rule;
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    QuadratureRule panel =
        gauss_legendre(nodes_per_panel, breakpoints[i - 1], breakpoints[i]);
    rule.nodes.insert(rule.nodes.end(), panel.nodes.begin(), panel.nodes.end());
    rule.weights.insert(rule.weights.end(), panel.weights.begin(),
                        panel.weights.end());
  }
  return rule;
}

}  // namespace gibbscert
