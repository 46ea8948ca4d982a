#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "gibbscert/bounds.hpp"
#include "gibbscert/errors.hpp"
#include "gibbscert/model.hpp"
#include "gibbscert/oracle.hpp"
#include "gibbscert/tuner.hpp"

using namespace gibbscert;

namespace {

BoundCurve geometric_curve(double rho) {
  UniformCertificate c{0.1, rho, ThetaInterval{0.0, 1.0}};
  return uniform_curve(c);
}

RosenthalCertificate make_cert(double eps, double r, double t) {
  return RosenthalCertificate{
      DriftCertificate{PhiKind::identity, 0.5, 0.5},
      MinorizationCertificate{eps, 3.0, ThetaInterval{0.0, 1.0}}, r, t};
}

}  // namespace

TEST_CASE("mixing/geometric_crossings") {
  auto curve = geometric_curve(0.75);
  auto m = mixing_time_from_curve(curve, 0.01);
  CHECK(m.reached);
  CHECK(m.ell_star == 17);  // 0.75^16 = 0.01002 > 0.01 >= 0.75^17

  // TV <= 1 holds before any step.
  CHECK(mixing_time_from_curve(curve, 1.0).ell_star == 0);

  CHECK_THROWS_AS(mixing_time_from_curve(curve, 0.0), domain_error);
  CHECK_THROWS_AS(mixing_time_from_curve(curve, -0.5), domain_error);
}

TEST_CASE("mixing/unreached_curves_extrapolate") {
  auto slow = geometric_curve(0.9999);
  auto m = mixing_time_from_curve(slow, 1e-6, 1000);
  CHECK_FALSE(m.reached);
  CHECK(m.ell_star == -1);
  REQUIRE(m.extrapolated.has_value());
  // log(1e-6) / log(0.9999) = 138149.3.
  CHECK(*m.extrapolated == doctest::Approx(138149.3).epsilon(1e-3));

  // A vacuous certificate never crosses and has no decay rate to project.
  UniformCertificate vac{0.0, 1.0, ThetaInterval{0.0, 1.0}};
  auto mv = mixing_time_from_curve(uniform_curve(vac), 0.5, 1000);
  CHECK_FALSE(mv.reached);
  CHECK_FALSE(mv.extrapolated.has_value());
}

TEST_CASE("mixing/closed_form_never_undershoots") {
  // The closed-form estimate forces both geometric terms below half the
  // threshold, so it is always at (or past) the true crossing.
  for (double eps : {0.01, 0.1, 0.5})
    for (double r : {0.05, 0.3})
      for (double t : {0.8, 0.95}) {
        auto curve = rosenthal_curve(make_cert(eps, r, t), 1.0);
        auto m = mixing_time_from_curve(curve, 0.01);
        REQUIRE(m.reached);
        REQUIRE(m.closed_form.has_value());
        CHECK(*m.closed_form >= m.ell_star - 1);
        CHECK(curve.value(*m.closed_form) <= 0.01 + 1e-12);
      }
}

TEST_CASE("envelope/pointwise_minimum_of_parts") {
  EnvelopeCurve env;
  CHECK_THROWS_AS(env.value(1), domain_error);
  env.parts.push_back(geometric_curve(0.9));   // better late
  env.parts.push_back(geometric_curve(0.5));   // better everywhere here
  CHECK(env.value(3) == doctest::Approx(std::pow(0.5, 3)));
  CHECK(env.capped(0) == 1.0);
}

TEST_CASE("optimize_rosenthal/poisson_gamma_is_feasible_and_deterministic") {
  PoissonGammaModel model;
  DriftCertificate drift{PhiKind::identity, 0.5, 0.5};
  Objective obj;  // minimize ell* to reach 0.01

  auto a = optimize_rosenthal(model, drift, 0.0, obj);
  auto b = optimize_rosenthal(model, drift, 0.0, obj);
  CHECK(a.best.t < 1.0);
  CHECK(a.best.minor.epsilon > 0.0);
  CHECK(a.mixing.reached);
  CHECK(a.mixing.ell_star > 0);
  CHECK(a.mixing.ell_star < 1000000);

  CHECK(a.best.r == b.best.r);
  CHECK(a.best.minor.d == b.best.minor.d);
  CHECK(a.best.minor.epsilon == b.best.minor.epsilon);
  CHECK(a.best.t == b.best.t);
  CHECK(a.trace.size() == b.trace.size());

  // The envelope is pointwise at least as sharp as every feasible candidate
  // the search examined (psi at x0 = 0 equals 2 for this drift).
  double psi0 = 2.0;
  for (const auto& row : a.trace) {
    if (!(row.eps > 0.0) || !(row.t < 1.0)) continue;
    for (int ell : {1, 10, 100, 1000, 5000}) {
      double candidate = std::pow(1.0 - row.eps, row.r * ell) +
                         std::pow(row.t, ell) * psi0;
      CHECK(a.envelope.value(ell) <= candidate + 1e-12);
    }
  }

  // Soundness: the winning curve stays above the exact sandwich lower edge.
  auto sandwich = bivariate_tv_sandwich(model, 0.0, 100);
  for (int ell = 1; ell <= 100; ++ell)
    CHECK(a.best_curve.value(ell) >= sandwich.lower[ell] - 1e-12);
}

TEST_CASE("optimize_rosenthal/trace_matches_the_curve_parameters") {
  PoissonGammaModel model;
  DriftCertificate drift{PhiKind::identity, 0.5, 0.5};
  auto res = optimize_rosenthal(model, drift, 0.0, Objective{});
  CHECK(res.trace.size() > 1000);  // full grid sweep is recorded
  bool winner_seen = false;
  for (const auto& row : res.trace)
    if (row.r == res.best.r && row.d == res.best.minor.d) winner_seen = true;
  CHECK(winner_seen);

  std::ostringstream csv;
  write_trace_csv(res.trace, csv);
  CHECK(csv.str().rfind("r,d,b_param,eps,t,objective\n", 0) == 0);
}

TEST_CASE("optimize_rosenthal/gaussian_has_a_contracting_certificate") {
  GaussianModel model;
  auto drift_spec = model.default_drift();
  REQUIRE(drift_spec.has_value());
  DriftCertificate drift{drift_spec->phi, drift_spec->alpha, drift_spec->beta};
  auto res = optimize_rosenthal(model, drift, 0.0, Objective{});
  CHECK(res.best.t < 1.0);
  CHECK(res.best.minor.epsilon > 0.0);
  // The certificate contracts but far too slowly to hit 0.01 in a million
  // steps; the result still reports the projected crossing.
  if (!res.mixing.reached) CHECK(res.mixing.extrapolated.has_value());
}

TEST_CASE("optimize_rosenthal/infeasibility_reports_the_binding_constraint") {
  PoissonGammaModel model;

  // beta close to 1 pushes the admissible d range past every represented
  // state, so no small set exists at all.
  DriftCertificate steep{PhiKind::identity, 0.5, 0.999};
  CHECK_THROWS_AS(optimize_rosenthal(model, steep, 0.0, Objective{}),
                  certificate_error);

  // A single mid-range r keeps t >= 1 at every d: the report must say so.
  DriftCertificate drift{PhiKind::identity, 0.5, 0.5};
  TunerOptions opts;
  opts.r_grid = 1;
  opts.refine = false;
  try {
    optimize_rosenthal(model, drift, 0.0, Objective{}, opts);
    FAIL("expected certificate_error");
  } catch (const certificate_error& e) {
    CHECK(std::string(e.what()).find("t >= 1") != std::string::npos);
  }
}

TEST_CASE("optimize_uniform/vacuous_result_has_no_projection") {
  auto res = optimize_uniform_B(PoissonGammaModel());
  CHECK(res.cert.u == 0.0);
  auto m = mixing_time_from_curve(res.curve, 0.5, 1000);
  CHECK_FALSE(m.reached);
  CHECK_FALSE(m.extrapolated.has_value());
}

TEST_CASE("optimize_uniform/beta_binomial_certificate_reaches_targets") {
  auto res = optimize_uniform_B(BetaBinomialModel(1));
  CHECK(res.cert.rho == doctest::Approx(0.75).epsilon(1e-9));
  auto m = mixing_time_from_curve(res.curve, 0.01);
  CHECK(m.reached);
  CHECK(m.ell_star == 17);
}
