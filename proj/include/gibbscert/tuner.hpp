#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gibbscert/bounds.hpp"

namespace gibbscert {

// Pointwise minimum of several certified curves.  Each part is a valid upper
// bound, so the minimum is one as well, and it is pointwise <= every curve
// the search examined (which no single parameter choice achieves).
struct EnvelopeCurve {
  std::vector<BoundCurve> parts;
  int ell_min = 0;
  double value(int ell) const;
  double capped(int ell) const;
};

struct Objective {
  enum class Kind { minimize_ell_star, minimize_bound_at };
  Kind kind = Kind::minimize_ell_star;
  double target = 0.01;  // TV threshold for minimize_ell_star
  int ell = 50;          // evaluation step for minimize_bound_at
};

struct MixingTimeResult {
  bool reached = false;
  int ell_star = -1;
  // Closed-form overestimate for Rosenthal curves: both geometric terms are
  // forced below threshold/2, so the true crossing is never later.
  std::optional<int> closed_form;
  // Geometric extrapolation of the crossing when ell_max was hit first.
  std::optional<double> extrapolated;
};

// Smallest l >= ell_min with curve value <= threshold, by bisection (every
// curve kind is nonincreasing on its valid range).
MixingTimeResult mixing_time_from_curve(const BoundCurve& curve,
                                        double threshold,
                                        int ell_max = 1000000);
MixingTimeResult mixing_time_from_curve(const EnvelopeCurve& curve,
                                        double threshold,
                                        int ell_max = 1000000);

struct TraceRow {
  double r;
  double d;
  std::string b_param;
  double eps;
  double t;
  double objective;  // ell* or bound value, +inf when infeasible
};

struct RosenthalSearchResult {
  RosenthalCertificate best;     // lexicographic winner (objective, d, r)
  double phi_x0;
  BoundCurve best_curve;
  EnvelopeCurve envelope;        // min over all feasible candidates examined
  MixingTimeResult mixing;       // of best_curve against the objective target
  std::vector<TraceRow> trace;
};

struct TunerOptions {
  int d_grid = 64;
  int r_grid = 63;
  double d_margin = 1e-6;    // d >= (1 + margin) * 2 alpha / (1 - beta)
  double d_max_factor = 100.0;
  bool refine = true;        // one coordinate-descent pass around the winner
};

// Grid search over (d, r, B) with epsilon recomputed per candidate, followed
// by one coordinate-descent refinement.  Deterministic: fixed grids and
// lexicographic tie-breaks.  Throws certificate_error when no candidate has
// t < 1 and epsilon > 0, naming the binding constraint.
RosenthalSearchResult optimize_rosenthal(const TwoComponentModel& model,
                                         const DriftCertificate& drift,
                                         double x0, const Objective& objective,
                                         const TunerOptions& opts = {});

void write_trace_csv(const std::vector<TraceRow>& trace, std::ostream& out);

struct UniformSearchResult {
  UniformCertificate cert;   // u = 0 with the full-space witness when vacuous
  BoundCurve curve;
};

// Maximizes u over the candidate B family (ternary refinement on quantile
// intervals).  u = 0 yields the constant-1 curve.
UniformSearchResult optimize_uniform_B(const TwoComponentModel& model);

}  // namespace gibbscert
