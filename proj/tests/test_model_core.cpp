#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "gibbscert/errors.hpp"
#include "gibbscert/model.hpp"
#include "gibbscert/quadrature.hpp"
#include "gibbscert/space.hpp"

using namespace gibbscert;

TEST_CASE("space/finite_grid_and_membership") {
  SpaceRepr s = SpaceRepr::finite({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0});
  CHECK(s.kind() == SpaceKind::finite);
  CHECK(s.grid().size() == 3);
  CHECK(s.contains(1.0));
  CHECK_FALSE(s.contains(3.0));
}

TEST_CASE("space/gauss_legendre_is_exact_on_polynomials") {
  // 3 nodes integrate degree <= 5 exactly: int_0^1 x^5 dx = 1/6.
  auto q3 = gauss_legendre(3, 0.0, 1.0);
  double v = 0.0;
  for (std::size_t i = 0; i < q3.nodes.size(); ++i)
    v += q3.weights[i] * std::pow(q3.nodes[i], 5);
  CHECK(v == doctest::Approx(1.0 / 6.0).epsilon(1e-13));

  // 5 nodes, degree 8: int_{-1}^1 x^8 dx = 2/9.
  auto q5 = gauss_legendre(5, -1.0, 1.0);
  v = 0.0;
  for (std::size_t i = 0; i < q5.nodes.size(); ++i)
    v += q5.weights[i] * std::pow(q5.nodes[i], 8);
  CHECK(v == doctest::Approx(2.0 / 9.0).epsilon(1e-13));
}

TEST_CASE("beta_binomial/marginal_is_uniform") {
  BetaBinomialModel m1(1), m10(10);
  for (int x = 0; x <= 1; ++x) CHECK(m1.marginal(x) == doctest::Approx(0.5));
  for (int x = 0; x <= 10; ++x)
    CHECK(m10.marginal(x) == doctest::Approx(1.0 / 11.0).epsilon(1e-13));
  CHECK(m10.sup_marginal() == doctest::Approx(1.0 / 11.0));
}

TEST_CASE("beta_binomial/x_chain_closed_form") {
  // n = 1: both diagonal entries 2/3, off-diagonal 1/3.
  BetaBinomialModel m(1);
  CHECK(m.x_chain_prob(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(m.x_chain_prob(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(m.x_chain_prob(1, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(m.x_chain_prob(1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));

  // Rows are probability vectors for larger n too.
  BetaBinomialModel m10(10);
  for (int x = 0; x <= 10; ++x) {
    double row = 0.0;
    for (int x2 = 0; x2 <= 10; ++x2) row += m10.x_chain_prob(x, x2);
    CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("beta_binomial/posterior_log_density_ratio") {
  // pi(theta | x) ~ Beta(x+1, n-x+1), so the log ratio at two theta values
  // is x log(t1/t2) + (n-x) log((1-t1)/(1-t2)).
  BetaBinomialModel m(5);
  int x = 2;
  double t1 = 0.3, t2 = 0.7;
  double want = x * std::log(t1 / t2) + (5 - x) * std::log((1 - t1) / (1 - t2));
  double got = m.log_posterior(t1, x) - m.log_posterior(t2, x);
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("beta_binomial/prior_interval_mass_and_quantile") {
  BetaBinomialModel m(3);
  CHECK(m.prior_mass(ThetaInterval{0.2, 0.7}) == doctest::Approx(0.5));
  CHECK(m.prior_quantile(0.25) == doctest::Approx(0.25));
}

TEST_CASE("poisson_gamma/marginal_and_x_chain") {
  PoissonGammaModel m;
  CHECK(m.n_max() >= 30);  // auto truncation keeps the tail below 1e-12
  CHECK(m.marginal(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(m.marginal(3) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
  CHECK(m.stationary_tail() < 1e-12);

  // P(x -> k) = C(x+k, k) (2/3)^{x+1} (1/3)^k.
  CHECK(m.x_chain_prob(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(m.x_chain_prob(1, 2) ==
        doctest::Approx(3.0 * 4.0 / 81.0).epsilon(1e-13));

  // Detailed balance of the closed form: m(x) P(x,k) = m(k) P(k,x).
  for (int x : {0, 2, 7})
    for (int k : {1, 3, 9}) {
      double lhs = m.marginal(x) * m.x_chain_prob(x, k);
      double rhs = m.marginal(k) * m.x_chain_prob(k, x);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }

  // Rows sum to 1 - leak, leak below the certified bound (up to the
  // rounding of a 40-term sum, which dwarfs the true leak from x = 0).
  double row = 0.0;
  for (int k = 0; k <= m.n_max(); ++k) row += m.x_chain_prob(0, k);
  CHECK(row <= 1.0 + 1e-14);
  CHECK(1.0 - row <= m.transition_row_tail(0) + 1e-15);

  // From the top state the leak is genuinely large and the certified bound
  // must still cover it.
  double top = 0.0;
  for (int k = 0; k <= m.n_max(); ++k) top += m.x_chain_prob(m.n_max(), k);
  CHECK(1.0 - top > 1e-6);
  CHECK(1.0 - top <= m.transition_row_tail(m.n_max()) + 1e-12);
}

TEST_CASE("poisson_gamma/prior_quantile_is_exponential") {
  PoissonGammaModel m;
  CHECK(m.prior_quantile(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-13));
  CHECK(m.prior_mass(ThetaInterval{0.5, 2.0}) ==
        doctest::Approx(std::exp(-0.5) - std::exp(-2.0)).epsilon(1e-13));
}

TEST_CASE("gaussian/chain_constants") {
  GaussianModel m;  // sigma2 = tau2 = 1/4
  CHECK(m.ar_coeff() == doctest::Approx(0.5));
  CHECK(m.step_var() == doctest::Approx(0.375));
  CHECK(m.stationary_var() == doctest::Approx(0.5));
  // With sigma2 + tau2 = 1/2 the AR(1) stationary variance and the exact
  // marginal variance coincide; check the density value at 0 and 1.
  double v = 0.5;
  CHECK(m.marginal(0.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * M_PI * v)).epsilon(1e-12));
  CHECK(m.marginal(1.0) ==
        doctest::Approx(std::exp(-1.0 / (2.0 * v)) / std::sqrt(2.0 * M_PI * v))
            .epsilon(1e-12));
  auto drift = m.default_drift();
  REQUIRE(drift.has_value());
  CHECK(drift->phi == PhiKind::absolute_value);
  CHECK(drift->beta == doctest::Approx(0.5));
  CHECK(drift->alpha ==
        doctest::Approx(0.5 * std::sqrt(2.0 / M_PI) *
                        (1.0 + std::sqrt(2.0) * 0.5)).epsilon(1e-12));
}

TEST_CASE("step/deterministic_given_seed") {
  BetaBinomialModel m(10);
  Rng a(12345), b(12345), c(99);
  GibbsState s{10.0, 0.0};
  GibbsState ra = m.step(s, a), rb = m.step(s, b), rc = m.step(s, c);
  CHECK(ra.x == rb.x);
  CHECK(ra.theta == rb.theta);
  CHECK((ra.x != rc.x || ra.theta != rc.theta));
  CHECK(ra.x >= 0.0);
  CHECK(ra.x <= 10.0);
  CHECK(ra.theta > 0.0);
  CHECK(ra.theta < 1.0);
}

TEST_CASE("finite_model/json_round_trip") {
  const char* text = R"({
    "name": "toy",
    "x_points": [0, 1],
    "theta_points": [0, 1],
    "mu_weights": [1, 1],
    "pi_weights": [0.5, 0.5],
    "f": [[0.8, 0.4], [0.2, 0.6]]
  })";
  FiniteModel m = FiniteModel::from_json_text(text);
  CHECK(m.name() == "toy");
  CHECK(m.x_size() == 2);
  CHECK(m.theta_size() == 2);
  // Marginal masses: m(0) = 0.5 (0.8 + 0.4), m(1) = 0.5 (0.2 + 0.6).
  CHECK(m.marginal(0.0) == doctest::Approx(0.6).epsilon(1e-13));
  CHECK(m.marginal(1.0) == doctest::Approx(0.4).epsilon(1e-13));
  CHECK(m.sup_marginal() == doctest::Approx(0.6));
  CHECK(m.prior_mass(ThetaIndexSet{{0}}) == doctest::Approx(0.5));
  CHECK(m.f_at(0, 0) == doctest::Approx(0.8).epsilon(1e-13));
}

TEST_CASE("finite_model/inconsistent_input_is_canonicalized") {
  // Scaling one conditional column changes nothing after renormalizing the
  // joint: the stored tables must satisfy sum_x f(x|t) mu(x) = 1 per theta.
  FiniteModel m = FiniteModel::from_tables(
      {0.0, 1.0}, {0.0, 1.0}, {1.0, 1.0}, {0.5, 0.5},
      {1.6, 0.4, 0.4, 0.6});  // first column doubled
  for (std::size_t t = 0; t < 2; ++t) {
    double col = 0.0;
    for (std::size_t x = 0; x < 2; ++x) col += m.f_at(x, t) * m.mu_weight_at(x);
    CHECK(col == doctest::Approx(1.0).epsilon(1e-12));
  }
  double total = 0.0;
  for (std::size_t x = 0; x < 2; ++x) total += m.marginal(x) * m.mu_weight_at(x);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("finite_model/bad_input_is_rejected") {
  CHECK_THROWS_AS(FiniteModel::from_tables({0.0, 1.0}, {0.0}, {1.0, 1.0},
                                           {1.0}, {-0.2, 1.2}),
                  domain_error);
  // A zero x row means the point can never be reached: zero marginal.
  CHECK_THROWS_AS(FiniteModel::from_tables({0.0, 1.0}, {0.0}, {1.0, 1.0},
                                           {1.0}, {1.0, 0.0}),
                  domain_error);
  CHECK_THROWS_AS(FiniteModel::from_json_text("{ not json"), domain_error);
  CHECK_THROWS_AS(FiniteModel::from_json_text(R"({"x_points": [0]})"),
                  domain_error);
}

TEST_CASE("registry/builtin_names_and_errors") {
  auto names = builtin_model_names();
  CHECK(names.size() == 3);
  auto bb = make_builtin_model("beta-binomial", {"n=4"});
  CHECK(dynamic_cast<BetaBinomialModel*>(bb.get()) != nullptr);
  auto pg = make_builtin_model("poisson-gamma", {"n_max=60"});
  CHECK(dynamic_cast<PoissonGammaModel*>(pg.get())->n_max() == 60);
  CHECK_THROWS_AS(make_builtin_model("no-such", {}), domain_error);
  CHECK_THROWS_AS(make_builtin_model("beta-binomial", {}), domain_error);
  CHECK_THROWS_AS(make_builtin_model("beta-binomial", {"n=4", "bogus=1"}),
                  domain_error);
}

TEST_CASE("three_component/tables_are_consistent") {
  // 2 x 2 x 2 strictly positive joint.
  std::vector<double> joint = {
      // (i, j, k) with k fastest
      0.10, 0.05, 0.08, 0.07,   // i = 0: (0,0,0) (0,0,1) (0,1,0) (0,1,1)
      0.20, 0.10, 0.25, 0.15};  // i = 1
  auto m = FiniteThreeComponentModel::from_joint({0.0, 1.0}, {0.0, 1.0},
                                                 {0.0, 1.0}, joint);
  CHECK(m.strictly_positive_f());
  double total = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      total += m.pair_mass(i, j);
      CHECK(m.pair_mass(i, j) == doctest::Approx(m.m(i, j)).epsilon(1e-12));
    }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.prior(0) + m.prior(1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.mu2_total() == doctest::Approx(2.0));

  // h is the (x1, theta) density: h(i, k) * prior(k) summed over k gives the
  // x1 marginal, which must match the pair masses summed over j.
  for (std::size_t i = 0; i < 2; ++i) {
    double via_h = 0.0;
    for (std::size_t k = 0; k < 2; ++k) via_h += m.h(i, k) * m.prior(k);
    CHECK(via_h == doctest::Approx(m.pair_mass(i, 0) + m.pair_mass(i, 1))
                       .epsilon(1e-12));
  }

  // One scan is a probability kernel on pairs.
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      double row = 0.0;
      for (std::size_t i2 = 0; i2 < 2; ++i2)
        for (std::size_t j2 = 0; j2 < 2; ++j2)
          row += m.pair_transition(i, j, i2, j2);
      CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("three_component/scan_respects_stationarity") {
  std::vector<double> joint = {0.10, 0.05, 0.08, 0.07, 0.20, 0.10, 0.25, 0.15};
  auto m = FiniteThreeComponentModel::from_joint({0.0, 1.0}, {0.0, 1.0},
                                                 {0.0, 1.0}, joint);
  // pair_mass is a fixed point of the scan kernel.
  for (std::size_t i2 = 0; i2 < 2; ++i2)
    for (std::size_t j2 = 0; j2 < 2; ++j2) {
      double flowed = 0.0;
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
          flowed += m.pair_mass(i, j) * m.pair_transition(i, j, i2, j2);
      CHECK(flowed == doctest::Approx(m.pair_mass(i2, j2)).epsilon(1e-12));
    }
}
