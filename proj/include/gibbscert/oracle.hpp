#pragma once

#include <string>
#include <vector>

#include "gibbscert/model.hpp"
#include "gibbscert/transition.hpp"

namespace gibbscert {

// Exact TV to stationarity for a finite chain: tv[l] is half the L1 distance
// between e_{x0} P^l and the stationary row, computed by repeated row-vector
// products.  tv[0] = 1 - m(x0).
std::vector<double> exact_tv_finite(const TransitionMatrix& tm, int x0_index,
                                    int ell_max);

// Certified enclosure of TV for a truncated chain.  The sub-stochastic
// evolution keeps only mass that never left the box; with true stationary
// masses m_j the sum of positive parts over the box is an exact lower bound,
// and adding the accumulated escape bound (defect) gives the upper:
//   sum_j (v~_l[j] - m_j)^+  <=  TV(l)  <=  that + defect_l.
// Widths therefore equal the defect; tails of m never enter the lower edge.
struct TVInterval {
  double lower;
  double upper;
};
struct TruncatedTVResult {
  std::vector<TVInterval> tv;     // index l = 0..ell_max
  std::vector<double> defect;     // certified escaped-mass bound per l
};
TruncatedTVResult exact_tv_truncated(const TransitionMatrix& tm, int x0_index,
                                     int ell_max, double precision = 1.0);

// TV between N(a^l x0, step_var (1 - a^{2l}) / (1 - a^2)) and N(0, stat_var),
// from the density crossing points (quadratic in the state) and normal CDFs.
double exact_tv_gaussian(double a, double step_var, double stat_var, double x0,
                         int ell);

// Bracket on the bivariate distance ||J^l((x0, .), .) - P||:
//   lower[l] = TV_x(l)   (marginalization contracts TV)
//   upper[l] = TV_x(l-1) (the step-l bivariate law is the step-(l-1) x law
//                         pushed through one common kernel)
// so upper[l+1] = lower[l] by construction.  Valid for l >= 1.
struct TVSandwich {
  double x0;
  std::vector<double> lower;   // index l = 1..ell_max stored from position 1
  std::vector<double> upper;
  std::string method;
  double error_budget;         // certified numeric slack on each edge
};

TVSandwich bivariate_tv_sandwich(const TwoComponentModel& model, double x0,
                                 int ell_max);

// Same bracket for the pair chain of a three-component model; x0 given as
// (i, j) indices.
TVSandwich bivariate_tv_sandwich(const FiniteThreeComponentModel& model,
                                 int i0, int j0, int ell_max);

// Monte Carlo cross-check harness: n_chains independent trajectories of
// length ell from x0; chain i draws from a generator seeded with seed ^ i.
struct SimulationSummary {
  int n_chains;
  int steps;
  std::uint64_t seed;
  double mean_x, var_x, se_x;
  double mean_theta, var_theta, se_theta;
  std::vector<double> terminal_x;
  std::vector<double> terminal_theta;
};

SimulationSummary simulate_chain(const TwoComponentModel& model, double x0,
                                 int ell, int n_chains, std::uint64_t seed);

}  // namespace gibbscert
