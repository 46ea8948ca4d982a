#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gibbscert/model.hpp"

namespace gibbscert {

// A candidate splitting rectangle A x B with A a set of x indices and B a set
// of theta indices (finite models).
struct RectanglePair {
  std::vector<int> a_indices;
  std::vector<int> b_indices;
};

// Sufficient condition for ergodicity through the rectangle A x B:
//   {f > 0} must contain A x B, must be contained in (A x Theta) u (X x B),
//   and A x B must carry positive stationary mass.
// On failure the violating cell (x index, theta index) is reported.
struct Condition3Result {
  bool holds;
  std::string reason;
  std::optional<std::pair<int, int>> violation;
};

Condition3Result check_condition_3(const FiniteModel& model,
                                   const RectanglePair& pair);

// Exact ergodicity decision for finite models: the chain is ergodic iff the
// bipartite graph on positive-mass x and theta points, with edges where the
// joint mass is positive, is connected.  A disconnected graph yields an
// invariant splitting; component labels are returned per index (-1 marks a
// null-mass point that was dropped).
struct ErgodicityDecision {
  bool ergodic;
  int component_count;             // among positive-mass points
  std::vector<int> x_component;    // size = x grid, -1 for null mass
  std::vector<int> theta_component;
  std::string detail;
};

ErgodicityDecision check_ergodic_finite(const FiniteModel& model);

// Models with strictly positive f (all three built-ins) are ergodic outright;
// finite models go through the exact decision; anything else is unsupported.
ErgodicityDecision check_ergodicity(const TwoComponentModel& model);

// Three-component version.  Bipartite connectivity is not sufficient here
// (the mid-scan update pins theta, so a one-scan move (i,j) -> (i2,j2) needs
// a single k with all three cells (i,j,k), (i,j2,k), (i2,j2,k) positive);
// instead the support of the pair transition kernel is built directly and
// its positive-mass states are grouped by connectivity.  Under stationarity
// every positive-mass state is recurrent, so the undirected grouping equals
// the communication classes.
struct PairErgodicityDecision {
  bool ergodic;
  int component_count;
  std::vector<int> pair_component;  // index i * x2_size + j, -1 for null mass
  std::string detail;
};

PairErgodicityDecision check_ergodicity(const FiniteThreeComponentModel& model);

}  // namespace gibbscert
