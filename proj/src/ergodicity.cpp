#include <numeric>
#include <sstream>

#include "gibbscert/ergodicity.hpp"
#include "gibbscert/errors.hpp"

namespace gibbscert {

namespace {

// Plain union-find over contiguous ids.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

Condition3Result check_condition_3(const FiniteModel& model,
                                   const RectanglePair& pair) {
  std::size_t nx = model.x_size();
  std::size_t nt = model.theta_size();
  std::vector<char> in_a(nx, 0), in_b(nt, 0);
  for (int i : pair.a_indices) {
    if (i < 0 || std::size_t(i) >= nx)
      throw domain_error("condition check: x index out of range");
    in_a[i] = 1;
  }
  for (int j : pair.b_indices) {
    if (j < 0 || std::size_t(j) >= nt)
      throw domain_error("condition check: theta index out of range");
    in_b[j] = 1;
  }

  double rect_mass = 0.0;
  for (std::size_t xi = 0; xi < nx; ++xi)
    for (std::size_t ti = 0; ti < nt; ++ti) {
      bool positive = model.f_at(xi, ti) > 0.0;
      if (in_a[xi] && in_b[ti]) {
        if (!positive)
          return {false, "f vanishes inside the rectangle",
                  std::make_pair(int(xi), int(ti))};
        rect_mass += model.f_at(xi, ti) * model.mu_weight_at(xi) *
                     model.prior_at(ti);
      } else if (!in_a[xi] && !in_b[ti] && positive) {
        return {false,
                "f is positive outside both the x block and the theta block",
                std::make_pair(int(xi), int(ti))};
      }
    }
  if (!(rect_mass > 0.0))
    return {false, "the rectangle carries no stationary mass", std::nullopt};
  return {true, "support lies in the cross and covers the rectangle",
          std::nullopt};
}

ErgodicityDecision check_ergodic_finite(const FiniteModel& model) {
  std::size_t nx = model.x_size();
  std::size_t nt = model.theta_size();

  // Two components never strand positive joint mass: x and theta communicate
  // exactly along cells with positive mass, so connectivity of the bipartite
  // support graph decides ergodicity.
  DisjointSets sets(nx + nt);
  std::vector<char> x_live(nx, 0), t_live(nt, 0);
  for (std::size_t xi = 0; xi < nx; ++xi)
    for (std::size_t ti = 0; ti < nt; ++ti)
      if (model.f_at(xi, ti) > 0.0) {
        x_live[xi] = 1;
        t_live[ti] = 1;
        sets.unite(xi, nx + ti);
      }

  ErgodicityDecision d;
  d.x_component.assign(nx, -1);
  d.theta_component.assign(nt, -1);
  std::vector<std::size_t> roots;
  auto label = [&](std::size_t id) {
    std::size_t r = sets.find(id);
    for (std::size_t c = 0; c < roots.size(); ++c)
      if (roots[c] == r) return int(c);
    roots.push_back(r);
    return int(roots.size()) - 1;
  };
  for (std::size_t xi = 0; xi < nx; ++xi)
    if (x_live[xi]) d.x_component[xi] = label(xi);
  for (std::size_t ti = 0; ti < nt; ++ti)
    if (t_live[ti]) d.theta_component[ti] = label(nx + ti);

  d.component_count = int(roots.size());
  d.ergodic = d.component_count == 1;
  std::ostringstream msg;
  if (d.ergodic) {
    msg << "support graph is connected on " << nx << " x " << nt << " cells";
  } else {
    msg << "support graph splits into " << d.component_count
        << " invariant components";
  }
  d.detail = msg.str();
  return d;
}

ErgodicityDecision check_ergodicity(const TwoComponentModel& model) {
  if (const auto* fm = dynamic_cast<const FiniteModel*>(&model))
    return check_ergodic_finite(*fm);
  if (model.strictly_positive_f()) {
    ErgodicityDecision d;
    d.ergodic = true;
    d.component_count = 1;
    d.detail = "f is strictly positive on the product space";
    return d;
  }
  throw unsupported_error("check_ergodicity: model '" + model.name() +
                          "' is neither finite nor strictly positive");
}

PairErgodicityDecision check_ergodicity(
    const FiniteThreeComponentModel& model) {
  std::size_t n1 = model.x1_size();
  std::size_t n2 = model.x2_size();
  std::size_t size = n1 * n2;

  // Bipartite support connectivity is the right test with two components but
  // not here: one scan can only change x2 and x1 under a single pinned theta,
  // so two cells sharing a theta slice need not communicate.  Work with the
  // support of the actual pair kernel instead.
  DisjointSets sets(size);
  std::vector<char> live(size, 0);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      std::size_t from = i * n2 + j;
      if (!(model.pair_mass(i, j) > 0.0)) continue;
      live[from] = 1;
      for (std::size_t i2 = 0; i2 < n1; ++i2)
        for (std::size_t j2 = 0; j2 < n2; ++j2) {
          std::size_t to = i2 * n2 + j2;
          if (to == from) continue;
          if (model.pair_transition(i, j, i2, j2) > 0.0) sets.unite(from, to);
        }
    }

  // Under the stationary law every positive-mass state is recurrent, so the
  // undirected reachability classes coincide with the communication classes.
  PairErgodicityDecision d;
  d.pair_component.assign(size, -1);
  std::vector<std::size_t> roots;
  for (std::size_t s = 0; s < size; ++s) {
    if (!live[s]) continue;
    std::size_t r = sets.find(s);
    int lbl = -1;
    for (std::size_t c = 0; c < roots.size(); ++c)
      if (roots[c] == r) lbl = int(c);
    if (lbl < 0) {
      roots.push_back(r);
      lbl = int(roots.size()) - 1;
    }
    d.pair_component[s] = lbl;
  }
  d.component_count = int(roots.size());
  d.ergodic = d.component_count == 1;
  std::ostringstream msg;
  if (d.ergodic) {
    msg << "pair kernel support is connected on " << n1 << " x " << n2
        << " states";
  } else {
    msg << "pair kernel support splits into " << d.component_count
        << " invariant components";
  }
  d.detail = msg.str();
  return d;
}

}  // namespace gibbscert
