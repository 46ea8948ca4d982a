#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gibbscert/ergodicity.hpp"
#include "gibbscert/errors.hpp"
#include "gibbscert/model.hpp"

using namespace gibbscert;

namespace {

FiniteModel strictly_positive_toy() {
  return FiniteModel::from_tables({0.0, 1.0}, {0.0, 1.0}, {1.0, 1.0},
                                  {0.5, 0.5}, {0.8, 0.4, 0.2, 0.6});
}

// Two isolated blocks: x=0 only talks to theta=0, x=1 only to theta=1.
FiniteModel block_diagonal_toy() {
  return FiniteModel::from_tables({0.0, 1.0}, {0.0, 1.0}, {1.0, 1.0},
                                  {0.5, 0.5}, {1.0, 0.0, 0.0, 1.0});
}

}  // namespace

TEST_CASE("ergodicity/strictly_positive_toy_is_ergodic") {
  auto d = check_ergodic_finite(strictly_positive_toy());
  CHECK(d.ergodic);
  CHECK(d.component_count == 1);
  CHECK(d.x_component == std::vector<int>{0, 0});
  CHECK(d.theta_component == std::vector<int>{0, 0});
}

TEST_CASE("ergodicity/block_diagonal_toy_decomposes") {
  auto d = check_ergodic_finite(block_diagonal_toy());
  CHECK_FALSE(d.ergodic);
  CHECK(d.component_count == 2);
  CHECK(d.x_component[0] != d.x_component[1]);
  // Each x block is paired with its own theta block.
  CHECK(d.theta_component[0] == d.x_component[0]);
  CHECK(d.theta_component[1] == d.x_component[1]);
}

TEST_CASE("ergodicity/builtins_have_positive_density") {
  CHECK(check_ergodicity(BetaBinomialModel(5)).ergodic);
  CHECK(check_ergodicity(PoissonGammaModel()).ergodic);
  CHECK(check_ergodicity(GaussianModel()).ergodic);
}

TEST_CASE("condition3/holds_on_positive_rectangle") {
  auto m = strictly_positive_toy();
  auto r = check_condition_3(m, RectanglePair{{0, 1}, {0, 1}});
  CHECK(r.holds);
  CHECK_FALSE(r.violation.has_value());
}

TEST_CASE("condition3/reports_support_outside_the_cross") {
  // Support is the diagonal; cell (1,1) lies outside (A x Theta) u (X x B)
  // for A = {0}, B = {0}.
  auto m = block_diagonal_toy();
  auto r = check_condition_3(m, RectanglePair{{0}, {0}});
  CHECK_FALSE(r.holds);
  REQUIRE(r.violation.has_value());
  CHECK(r.violation->first == 1);
  CHECK(r.violation->second == 1);
}

TEST_CASE("condition3/rejects_rectangle_with_a_hole") {
  // f vanishes at (1, 0): the rectangle {0,1} x {0} is not inside the
  // support, so the condition cannot certify it.
  FiniteModel m = FiniteModel::from_tables({0.0, 1.0}, {0.0, 1.0}, {1.0, 1.0},
                                           {0.5, 0.5}, {1.0, 0.4, 0.0, 0.6});
  auto r = check_condition_3(m, RectanglePair{{0, 1}, {0}});
  CHECK_FALSE(r.holds);
  REQUIRE(r.violation.has_value());
  CHECK(r.violation->first == 1);
  CHECK(r.violation->second == 0);
}

TEST_CASE("three_component/positive_toy_is_ergodic") {
  std::vector<double> joint = {0.10, 0.05, 0.08, 0.07, 0.20, 0.10, 0.25, 0.15};
  auto m = FiniteThreeComponentModel::from_joint({0.0, 1.0}, {0.0, 1.0},
                                                 {0.0, 1.0}, joint);
  auto d = check_ergodicity(m);
  CHECK(d.ergodic);
  CHECK(d.component_count == 1);
}

TEST_CASE("three_component/bipartite_connectivity_is_not_enough") {
  // Support {(0,0), (1,1)} over a single theta: every coordinate touches
  // theta 0, so the coordinate-theta graph is connected, yet one scan from
  // (0,0) must keep x2 = 0 (the mid-scan draw conditions on x1 = 0) and then
  // x1 = 0.  The pair chain has two closed classes.
  std::vector<double> joint = {0.5, 0.0, 0.0, 0.5};  // (i, j) pairs, one theta
  auto m = FiniteThreeComponentModel::from_joint({0.0, 1.0}, {0.0, 1.0},
                                                 {0.0}, joint);
  CHECK(m.pair_transition(0, 0, 0, 0) == doctest::Approx(1.0));
  CHECK(m.pair_transition(0, 0, 1, 1) == doctest::Approx(0.0));
  auto d = check_ergodicity(m);
  CHECK_FALSE(d.ergodic);
  CHECK(d.component_count == 2);
  CHECK(d.pair_component[0] != d.pair_component[3]);
  // The zero-mass pairs (0,1) and (1,0) are not part of any class.
  CHECK(d.pair_component[1] == -1);
  CHECK(d.pair_component[2] == -1);
}

TEST_CASE("three_component/one_extra_cell_reconnects_the_scan") {
  // Adding mass at (0,1) lets the mid-scan update move x2, after which the
  // last update can move x1: the pair chain becomes irreducible.
  std::vector<double> joint = {0.4, 0.2, 0.0, 0.4};
  auto m = FiniteThreeComponentModel::from_joint({0.0, 1.0}, {0.0, 1.0},
                                                 {0.0}, joint);
  auto d = check_ergodicity(m);
  CHECK(d.ergodic);
  CHECK(d.component_count == 1);
}
