#include <algorithm>
#include <cmath>

#include "gibbscert/errors.hpp"
#include "gibbscert/model.hpp"

namespace gibbscert {

FiniteThreeComponentModel FiniteThreeComponentModel::from_joint(
    std::vector<double> x1_points, std::vector<double> x2_points,
    std::vector<double> theta_points, std::vector<double> joint_row_major,
    std::vector<double> mu1_weights, std::vector<double> mu2_weights,
    std::string name) {
  return FiniteThreeComponentModel(
      std::move(x1_points), std::move(x2_points), std::move(theta_points),
      std::move(joint_row_major), std::move(mu1_weights),
      std::move(mu2_weights), std::move(name));
}

FiniteThreeComponentModel::FiniteThreeComponentModel(
    std::vector<double> x1, std::vector<double> x2, std::vector<double> theta,
    std::vector<double> joint, std::vector<double> mu1, std::vector<double> mu2,
    std::string name)
    : name_(std::move(name)),
      x1_(std::move(x1)),
      x2_(std::move(x2)),
      theta_(std::move(theta)),
      mu1_(std::move(mu1)),
      mu2_(std::move(mu2)),
      joint_(std::move(joint)) {
  std::size_t n1 = x1_.size(), n2 = x2_.size(), nt = theta_.size();
  if (n1 == 0 || n2 == 0 || nt == 0)
    throw domain_error("3-block model: empty grid");
  if (joint_.size() != n1 * n2 * nt)
    throw domain_error("3-block model: joint size does not match the grids");
  if (mu1_.empty()) mu1_.assign(n1, 1.0);
  if (mu2_.empty()) mu2_.assign(n2, 1.0);
  if (mu1_.size() != n1 || mu2_.size() != n2)
    throw domain_error("3-block model: base weight sizes do not match");
  for (double v : mu1_)
    if (!(v > 0.0)) throw domain_error("3-block model: mu1 weights must be positive");
  for (double v : mu2_)
    if (!(v > 0.0)) throw domain_error("3-block model: mu2 weights must be positive");

  double total = 0.0;
  for (double v : joint_) {
    if (v < 0.0) throw domain_error("3-block model: negative joint entry");
    total += v;
  }
  if (!(total > 0.0)) throw domain_error("3-block model: joint mass is zero");
  for (double& v : joint_) v /= total;

  prior_.assign(nt, 0.0);
  hmass_.assign(n1 * nt, 0.0);
  g2mass_.assign(n2 * nt, 0.0);
  mmass_.assign(n1 * n2, 0.0);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j)
      for (std::size_t k = 0; k < nt; ++k) {
        double v = joint_[(i * n2 + j) * nt + k];
        prior_[k] += v;
        hmass_[i * nt + k] += v;
        g2mass_[j * nt + k] += v;
        mmass_[i * n2 + j] += v;
      }
  for (double v : prior_)
    if (!(v > 0.0)) throw domain_error("3-block model: zero theta marginal");
}

double FiniteThreeComponentModel::joint_mass(std::size_t i, std::size_t j,
                                             std::size_t k) const {
  return joint_[(i * x2_.size() + j) * theta_.size() + k];
}

double FiniteThreeComponentModel::f(std::size_t i, std::size_t j,
                                    std::size_t k) const {
  return joint_mass(i, j, k) / (mu1_[i] * mu2_[j] * prior_[k]);
}

double FiniteThreeComponentModel::prior(std::size_t k) const {
  return prior_[k];
}

double FiniteThreeComponentModel::m(std::size_t i, std::size_t j) const {
  return mmass_[i * x2_.size() + j] / (mu1_[i] * mu2_[j]);
}

double FiniteThreeComponentModel::pair_mass(std::size_t i,
                                            std::size_t j) const {
  return mmass_[i * x2_.size() + j];
}

double FiniteThreeComponentModel::h(std::size_t i, std::size_t k) const {
  return hmass_[i * theta_.size() + k] / (mu1_[i] * prior_[k]);
}

double FiniteThreeComponentModel::mu2_total() const {
  double s = 0.0;
  for (double v : mu2_) s += v;
  return s;
}

bool FiniteThreeComponentModel::strictly_positive_f() const {
  return std::all_of(joint_.begin(), joint_.end(),
                     [](double v) { return v > 0.0; });
}

double FiniteThreeComponentModel::pair_transition(std::size_t i, std::size_t j,
                                                  std::size_t i2,
                                                  std::size_t j2) const {
  std::size_t n2 = x2_.size(), nt = theta_.size();
  double pm = mmass_[i * n2 + j];
  if (!(pm > 0.0)) throw domain_error("3-block pair_transition: null start state");
  // Scan: theta' | (x1, x2), then x2' | (x1, theta'), then x1' | (x2', theta').
  double total = 0.0;
  for (std::size_t k = 0; k < nt; ++k) {
    double post = joint_[(i * n2 + j) * nt + k] / pm;
    if (!(post > 0.0)) continue;
    double hm = hmass_[i * nt + k];
    double x2m = joint_[(i * n2 + j2) * nt + k];
    if (!(hm > 0.0) || !(x2m > 0.0)) continue;
    double g2m = g2mass_[j2 * nt + k];
    double x1m = joint_[(i2 * n2 + j2) * nt + k];
    if (!(g2m > 0.0) || !(x1m > 0.0)) continue;
    total += post * (x2m / hm) * (x1m / g2m);
  }
  return total;
}

}  // namespace gibbscert
