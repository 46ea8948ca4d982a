#pragma once

#include <vector>

namespace gibbscert {

// Fixed quadrature rule: nodes strictly increasing, weights positive.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

// Gauss-Legendre rule with n nodes on [a, b] (Golub-Welsch).
QuadratureRule gauss_legendre(int n, double a, double b);

// Composite Gauss-Legendre: one n-node panel between consecutive breakpoints.
// Keeps integrands with a known kink (e.g. |x| at 0) analytic on each panel.
QuadratureRule composite_gauss_legendre(const std::vector<double>& breakpoints,
                                        int nodes_per_panel);

}  // namespace gibbscert
