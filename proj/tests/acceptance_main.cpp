// Acceptance gate: every release-blocking property on one pass/fail line
// each.  Exits nonzero if any criterion fails.

#include <cmath>
#include <cstdio>
#include <vector>

#include "gibbscert/bounds.hpp"
#include "gibbscert/ergodicity.hpp"
#include "gibbscert/model.hpp"
#include "gibbscert/oracle.hpp"
#include "gibbscert/transition.hpp"
#include "gibbscert/tuner.hpp"

using namespace gibbscert;

namespace {

constexpr double kMargin = 1e-12;

// 1. The matched geometric bracket straddles the exact bivariate sandwich
// for the conjugate-binomial chain started at the top state.
bool dks_bracket_straddles_sandwich() {
  for (int n : {1, 5, 10, 20}) {
    BetaBinomialModel model(n);
    auto s = bivariate_tv_sandwich(model, double(n), 50);
    double b1 = 1.0 - 2.0 / (n + 2.0);
    for (int ell = 1; ell <= 50; ++ell) {
      double lower = 0.5 * std::pow(b1, ell);
      double upper = std::pow(b1, ell - 0.5) / (1.0 - std::pow(b1, 2 * ell - 1));
      if (lower > s.upper[ell] + kMargin) return false;
      if (s.lower[ell] > upper + kMargin) return false;
    }
  }
  return true;
}

// 2. Two-state chain solved in closed form: TV from x0 = 1 is (1/2) 3^{-l}.
bool two_state_exact_tv() {
  auto tm = x_chain_matrix(BetaBinomialModel(1));
  auto tv = exact_tv_finite(tm, 1, 40);
  for (int ell = 0; ell <= 40; ++ell)
    if (std::abs(tv[ell] - 0.5 * std::pow(3.0, -ell)) > 1e-12) return false;
  return true;
}

// 3. Second-largest eigenvalue of the x chain equals 1 - 2/(n+2).
bool second_eigenvalue_identity() {
  for (int n = 1; n <= 30; ++n) {
    auto sd = spectral_decomposition(x_chain_matrix(BetaBinomialModel(n)));
    if (std::abs(sd.eigenvalues[1] - (1.0 - 2.0 / (n + 2.0))) > 1e-10)
      return false;
  }
  return true;
}

// 4. The eigenfunction bound dominates the exact chain TV from every state.
bool spectral_bound_is_sound() {
  for (int n : {1, 5, 10}) {
    auto tm = x_chain_matrix(BetaBinomialModel(n));
    auto sd = spectral_decomposition(tm);
    for (int s = 0; s <= n; ++s) {
      auto curve = spectral_curve(sd, tm, double(s));
      auto tv = exact_tv_finite(tm, s, 50);
      for (int ell = 1; ell <= 50; ++ell)
        if (curve.value(ell) < tv[ell] - kMargin) return false;
    }
  }
  return true;
}

// 5. The one-step minorization bound reproduces its closed-form rate for
// n = 10 and stays above the sandwich upper edge from every start.
bool uniform_bound_numbers() {
  BetaBinomialModel model(10);
  auto res = optimize_uniform_B(model);
  double closed = 1.0 - std::pow(10.0 / 22.0, 10);
  if (std::abs(res.cert.rho - closed) > 5e-6) return false;
  if (std::abs(res.cert.rho - 0.999624) > 5e-6) return false;
  for (int x0 = 0; x0 <= 10; ++x0) {
    auto s = bivariate_tv_sandwich(model, double(x0), 200);
    for (int ell = 1; ell <= 200; ++ell)
      if (res.curve.value(ell) < s.upper[ell] - kMargin) return false;
  }
  return true;
}

// 6. (J phi)(x) = (x+1)/2 for the conjugate-Poisson chain, wide truncation.
bool poisson_drift_identity() {
  PoissonGammaModel model(200);
  for (int x = 0; x <= 50; ++x)
    if (std::abs(drift_expectation(model, PhiKind::identity, x) -
                 0.5 * (x + 1)) > 1e-8)
      return false;
  return true;
}

// 7. Gaussian drift inequality on a 21-point grid over [-5, 5].
bool gaussian_drift_inequality() {
  GaussianModel model;  // sigma2 = tau2 = 1/4
  double sigma = 0.5, tau = 0.5;
  double alpha = sigma * std::sqrt(2.0 / M_PI) * (1.0 + std::sqrt(2.0) * tau);
  for (int i = 0; i <= 20; ++i) {
    double x = -5.0 + 0.5 * i;
    double jx = drift_expectation(model, PhiKind::absolute_value, x);
    if (jx > alpha + 2.0 * tau * tau * std::abs(x) + 1e-8) return false;
  }
  return true;
}

// 8. The tuned drift/minorization certificate contracts, stays above the
// exact sandwich lower edge, and reaches TV 0.01 in finitely many steps.
bool rosenthal_tuner_soundness() {
  PoissonGammaModel model;
  DriftCertificate drift{PhiKind::identity, 0.5, 0.5};
  auto res = optimize_rosenthal(model, drift, 0.0, Objective{});
  if (!(res.best.t < 1.0)) return false;
  if (!res.mixing.reached || res.mixing.ell_star < 0) return false;
  if (res.best_curve.value(res.mixing.ell_star) > 0.01) return false;
  auto s = bivariate_tv_sandwich(model, 0.0, 100);
  for (int ell = 1; ell <= 100; ++ell)
    if (res.best_curve.value(ell) < s.lower[ell] - kMargin) return false;
  return true;
}

// 9. Contraction-factor formula at two pinned parameter points.
bool rosenthal_t_spot_values() {
  return std::abs(rosenthal_t(0.5, 0.5, 20.0, 0.05).t - 0.6859) <= 5e-4 &&
         std::abs(rosenthal_t(0.5, 0.5, 3.0, 0.5).t - 2.0917) <= 5e-4;
}

// 10. Three-component uniform bound dominates the exact pair-chain sandwich
// lower edge on a strictly positive 2x2x2 toy.
bool three_component_bound_soundness() {
  std::vector<double> joint = {0.10, 0.05, 0.08, 0.07,
                               0.20, 0.10, 0.25, 0.15};
  auto model = FiniteThreeComponentModel::from_joint({0.0, 1.0}, {0.0, 1.0},
                                                     {0.0, 1.0}, joint);
  if (!model.strictly_positive_f()) return false;
  auto curve = prop4_curve(best_three_component_certificate(model));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      auto s = bivariate_tv_sandwich(model, i, j, 50);
      for (int ell = 1; ell <= 50; ++ell)
        if (curve.value(ell) < s.lower[ell] - kMargin) return false;
    }
  return true;
}

// 11. The ergodicity check decomposes a block-diagonal toy, whose chain
// never leaves its block; strictly positive toys pass.
bool ergodicity_decision_quality() {
  auto blocked = FiniteModel::from_tables({0.0, 1.0}, {0.0, 1.0}, {1.0, 1.0},
                                          {0.5, 0.5}, {1.0, 0.0, 0.0, 1.0});
  auto d = check_ergodic_finite(blocked);
  if (d.ergodic || d.component_count != 2) return false;
  if (d.x_component[0] == d.x_component[1]) return false;
  auto tv = exact_tv_finite(x_chain_matrix(blocked), 0, 200);
  for (int ell = 0; ell <= 200; ++ell)
    if (tv[ell] < 0.25) return false;  // stuck at 1/2 in exact arithmetic

  auto positive = FiniteModel::from_tables({0.0, 1.0}, {0.0, 1.0}, {1.0, 1.0},
                                           {0.5, 0.5}, {0.8, 0.4, 0.2, 0.6});
  return check_ergodic_finite(positive).ergodic;
}

// 12. Exact chain TV is nonincreasing in l on every built-in model with a
// finite or truncated state space.
bool tv_monotonicity() {
  for (int n : {1, 5, 10, 20}) {
    auto tm = x_chain_matrix(BetaBinomialModel(n));
    for (int x0 : {0, n / 2, n}) {
      auto tv = exact_tv_finite(tm, x0, 200);
      for (int ell = 1; ell <= 200; ++ell)
        if (tv[ell] > tv[ell - 1] + kMargin) return false;
    }
  }
  auto tm = x_chain_matrix(PoissonGammaModel());
  for (int x0 : {0, 9, 30}) {
    auto r = exact_tv_truncated(tm, x0, 200);
    for (int ell = 1; ell <= 200; ++ell)
      if (r.tv[ell].lower > r.tv[ell - 1].lower + kMargin) return false;
  }
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    bool (*check)();
  };
  const Criterion criteria[] = {
      {"dks-bracket-straddles-sandwich", dks_bracket_straddles_sandwich},
      {"two-state-exact-tv", two_state_exact_tv},
      {"second-eigenvalue-identity", second_eigenvalue_identity},
      {"spectral-bound-soundness", spectral_bound_is_sound},
      {"uniform-bound-numbers", uniform_bound_numbers},
      {"poisson-drift-identity", poisson_drift_identity},
      {"gaussian-drift-inequality", gaussian_drift_inequality},
      {"rosenthal-tuner-soundness", rosenthal_tuner_soundness},
      {"rosenthal-t-spot-values", rosenthal_t_spot_values},
      {"three-component-bound-soundness", three_component_bound_soundness},
      {"ergodicity-decision-quality", ergodicity_decision_quality},
      {"tv-monotonicity", tv_monotonicity},
  };

  int failures = 0;
  int idx = 0;
  for (const auto& c : criteria) {
    ++idx;
    bool ok = false;
    try {
      ok = c.check();
    } catch (const std::exception& e) {
      std::fprintf(stderr, "criterion-%02d threw: %s\n", idx, e.what());
    }
    std::printf("%s criterion-%02d %s\n", ok ? "PASS" : "FAIL", idx, c.name);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
