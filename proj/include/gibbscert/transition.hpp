#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gibbscert/model.hpp"

namespace gibbscert {

// Exact (or certified sub-stochastic) x-chain transition matrix of a model.
// Rows of P sum to 1 up to row_leak[i]; on truncated spaces row_leak holds a
// certified upper bound on the escaped mass, on exact spaces it is zero.
struct TransitionMatrix {
  Eigen::MatrixXd P;
  Eigen::VectorXd stationary;     // stationary masses of the represented states
  std::vector<double> states;     // x value for each row/column
  std::vector<double> row_leak;   // certified per-row mass outside the grid
  double stationary_tail = 0.0;   // certified stationary mass outside the grid
  bool truncated = false;

  std::size_t size() const { return states.size(); }
};

// Build the x-chain matrix.  Exact closed forms are used for the built-ins;
// FiniteModel composes its two conditional tables.  Models on Real1D x spaces
// are rejected (no exact matrix exists).
TransitionMatrix x_chain_matrix(const TwoComponentModel& model);

// Pair-chain matrix of a three-component model, states ordered (i, j) with j
// fastest.
TransitionMatrix pair_chain_matrix(const FiniteThreeComponentModel& model);

// Validation: rows within tolerance of 1 - row_leak, entries nonnegative, and
// stationary a left fixed point.  Throws numeric_error on failure.
void validate_transition_matrix(const TransitionMatrix& tm,
                                double row_tol = 1e-12,
                                double fixed_point_tol = 1e-10);

// Spectral data of a reversible chain: eigenvalues in decreasing order and
// eigenfunctions orthonormal in L2 of the stationary law, phi_0 = 1.
struct SpectralData {
  std::vector<double> eigenvalues;
  Eigen::MatrixXd eigenfunctions;  // column j holds phi_j on the state grid
};

// Symmetrize by the stationary law and diagonalize.  Throws certificate_error
// when the reversibility check m_i P_ij = m_j P_ji fails beyond tolerance.
SpectralData spectral_decomposition(const TransitionMatrix& tm,
                                    double reversibility_tol = 1e-10);

}  // namespace gibbscert
