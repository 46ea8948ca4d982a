#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gibbscert/model.hpp"
#include "gibbscert/transition.hpp"

namespace gibbscert {

// A certified decreasing-in-ell bound on total variation distance to
// stationarity, valid for ell >= ell_min.  Values are the raw formula output;
// capped() clips to [0, 1] for reporting since TV never exceeds 1.
struct BoundCurve {
  std::string kind;            // uniform | rosenthal | prop4 | dks_lower | dks_upper | spectral
  int ell_min = 1;
  std::vector<std::pair<std::string, double>> params;
  double uniform_rate = 0.0;   // rho for geometric curves, 0 if not geometric

  double value(int ell) const;         // raw bound at ell (may exceed 1)
  double capped(int ell) const;        // min(value, 1), floored at 0
  std::vector<double> sample(int ell_lo, int ell_hi) const;

  // The raw evaluator; each kind stores its own closed form via params.
  // Kinds:
  //  uniform:    value = rho^ell                      params: u, rho
  //  rosenthal:  value = (1-eps)^{r ell} + t^ell * c  params: eps, r, t, c, d, alpha, beta
  //  prop4:      value = rho^ell with rho = 1 - v     params: v, rho
  //  dks_lower:  value = 0.5 * beta1^ell              params: beta1
  //  dks_upper:  value = beta1^{ell - 1/2} / (1 - beta1^{2 ell - 1})
  //  spectral:   value = 0.5 * sqrt(sum_j beta_j^{2 ell} phi_j(s)^2)
  //              (terms stored in spectral_terms)
  std::vector<std::pair<double, double>> spectral_terms;  // (beta_j, phi_j(s)^2)

  double param(const std::string& key) const;
  bool has_param(const std::string& key) const;
};

// Uniform-minorization certificate: the x chain satisfies a one-step Doeblin
// condition with constant u, giving TV <= rho^ell with rho = 1 - u / sup m.
struct UniformCertificate {
  double u;
  double rho;
  ThetaSet witness_b;
};

// Geometric drift plus small-set minorization, combined through the standard
// quantitative ergodicity theorem.  epsilon minorizes the x chain on the
// sublevel set {phi <= d}; the bound at ell from start x is
//   (1 - eps)^{r ell} + t^ell * (1 + alpha / (1 - beta) + phi(x)).
struct DriftCertificate {
  PhiKind phi;
  double alpha;
  double beta;
};

struct MinorizationCertificate {
  double epsilon;  // in (0, 1]
  double d;        // must exceed 2 alpha / (1 - beta)
  ThetaSet witness_b;
};

struct RosenthalCertificate {
  DriftCertificate drift;
  MinorizationCertificate minor;
  double r;       // in (0, 1)
  double t;       // contraction factor; useful only when t < 1
};

// --- certificate construction -------------------------------------------

// Candidate theta sets examined by the search routines: central prior
// quantile intervals [q_delta, q_{1-delta}] on continuous priors, single
// points and all subsets up to a size cap on small finite priors.
std::vector<ThetaSet> candidate_theta_sets(const TwoComponentModel& model);

// Best uniform certificate over the candidate sets (grid-certified inf f).
// u = 0 with a full-space witness when every candidate is vacuous (e.g. the
// x space is unbounded, where no grid can certify a positive infimum).
UniformCertificate best_uniform_certificate(const TwoComponentModel& model);

// u for one specific set, grid-certified.
double uniform_u_for_set(const TwoComponentModel& model, const ThetaSet& b);

// Theta points certifying infima of f over the given set: the set's own
// points for index sets, the model's eval points for intervals.
std::vector<double> certified_theta_points(const TwoComponentModel& model,
                                           const ThetaSet& b);

// Verify a drift certificate by evaluating (J phi)(x) on the grid.  Throws
// certificate_error if alpha + beta * phi(x) is exceeded beyond tolerance.
void verify_drift(const TwoComponentModel& model, const DriftCertificate& c,
                  double tol = 1e-8);

// (J phi)(x) computed exactly for the built-ins, by summation/quadrature
// otherwise.
double drift_expectation(const TwoComponentModel& model, PhiKind phi, double x);

double phi_value(PhiKind phi, double x);

// Minorization on the sublevel set A = {phi <= d}:
//   eps = pi(B) * inf_{A x B} f / sup_A m.
double minorization_epsilon(const TwoComponentModel& model, PhiKind phi,
                            double d, const ThetaSet& b);

// The contraction factor t(r; alpha, beta, d) of the drift/minorization
// theorem.  feasible = (t < 1); t >= 1 means the bound never contracts.
struct RosenthalTValue {
  double t;
  bool feasible;
};
RosenthalTValue rosenthal_t(double alpha, double beta, double d, double r);

// --- curve construction --------------------------------------------------

BoundCurve uniform_curve(const UniformCertificate& c);
BoundCurve rosenthal_curve(const RosenthalCertificate& c, double phi_x0);
BoundCurve spectral_curve(const SpectralData& sd, const TransitionMatrix& tm,
                          double x0);

// Matched geometric bracket for the conjugate-binomial chain started at
// x0 = n: lower 0.5 * beta1^ell, upper beta1^{ell-1/2} / (1 - beta1^{2ell-1})
// with beta1 = 1 - 2 / (n + 2).
BoundCurve dks_lower_curve(int n);
BoundCurve dks_upper_curve(int n);

// Three-component uniform bound for the scan theta -> x2 -> x1:
//   v = mu2(X2) * max_B pi(B) * (inf_{X x B} f)^2 / sup_{X1 x B} h
// and the curve is (1 - v / sup m)^ell.  The scan order matters: the middle
// update must be the one normalized by h for this v to minorize the kernel.
struct ThreeComponentCertificate {
  double v;
  double sup_m;
  double rho;
  std::vector<int> b_indices;
};
ThreeComponentCertificate best_three_component_certificate(
    const FiniteThreeComponentModel& model);
double prop4_v(const FiniteThreeComponentModel& model,
               const std::vector<int>& b_indices);
BoundCurve prop4_curve(const ThreeComponentCertificate& c);

}  // namespace gibbscert
