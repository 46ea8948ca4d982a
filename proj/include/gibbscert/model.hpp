#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gibbscert/rng.hpp"
#include "gibbscert/space.hpp"

namespace gibbscert {

// Subsets of the theta space that the minorization machinery quantifies over.
// Discrete spaces use index sets, continuous spaces use closed intervals.
struct ThetaIndexSet {
  std::vector<int> indices;
};
struct ThetaInterval {
  double lo;
  double hi;
};
using ThetaSet = std::variant<ThetaIndexSet, ThetaInterval>;

struct GibbsState {
  double x;
  double theta;
};

// Drift data for the geometric-drift machinery: a nonnegative function phi on
// the x space together with certified constants such that (J phi)(x) <= alpha
// + beta * phi(x) with beta < 1.
enum class PhiKind { identity, absolute_value };

struct DriftSpec {
  PhiKind phi;
  double alpha;
  double beta;
};

// A two-component systematic-scan sampler: one step from (x, theta) draws
// theta' from the conditional given x, then x' from f(. | theta').  The
// x coordinate alone is Markov and reversible with respect to the marginal m.
class TwoComponentModel {
 public:
  virtual ~TwoComponentModel() = default;

  virtual std::string name() const = 0;
  virtual const SpaceRepr& x_space() const = 0;
  virtual const SpaceRepr& theta_space() const = 0;

  // log f(x | theta); -inf where the density vanishes.
  virtual double log_f(double x, double theta) const = 0;
  double f(double x, double theta) const;

  // log of the prior density/mass of theta.
  virtual double log_prior(double theta) const = 0;

  // Marginal m(x) = integral of f(x|t) pi(dt).  Built-in models override with
  // closed forms; the default integrates over the theta grid.
  virtual double marginal(double x) const;

  // log pi(theta | x) = log f + log prior - log m.
  double log_posterior(double theta, double x) const;

  // Prior mass pi(B) of a theta set.
  virtual double prior_mass(const ThetaSet& b) const;

  // Prior quantile: smallest t with pi((-inf, t]) >= p.  Used to build
  // candidate sets B as central quantile intervals.
  virtual double prior_quantile(double p) const = 0;

  // One transition of the full (x, theta) chain.
  virtual GibbsState step(const GibbsState& s, Rng& rng) const = 0;

  // True when f(x, theta) > 0 everywhere on X x Theta, which settles
  // ergodicity immediately.
  virtual bool strictly_positive_f() const = 0;

  // sup_x m(x) over the x space, certified (exact for the built-ins).
  virtual double sup_marginal() const = 0;

  // Certified upper bound on stationary x mass outside the represented grid;
  // zero when the representation is exact.
  virtual double stationary_tail() const;

  // Certified upper bound on one-step transition mass from x to outside the
  // represented grid; zero when the representation is exact.
  virtual double transition_row_tail(double x) const;

  // Drift certificate supplied by the model, when one is known.
  virtual std::optional<DriftSpec> default_drift() const;

  // Points at which x-side infima/suprema are certified.  Defaults to the
  // space grid; models may refine (the Gaussian adds the mode at zero).
  virtual std::vector<double> x_eval_points() const;

  // Points at which theta-side infima over a ThetaInterval are certified.
  // Defaults to quadrature nodes inside the interval plus both endpoints,
  // which is exact for conditionals unimodal in theta.
  virtual std::vector<double> theta_eval_points(const ThetaInterval& b) const;
};

// x | theta ~ Binomial(n, theta), theta ~ Uniform(0, 1).
// m is uniform on {0..n}; the posterior is Beta(x + 1, n - x + 1).
class BetaBinomialModel : public TwoComponentModel {
 public:
  explicit BetaBinomialModel(int n);

  std::string name() const override;
  const SpaceRepr& x_space() const override;
  const SpaceRepr& theta_space() const override;
  double log_f(double x, double theta) const override;
  double log_prior(double theta) const override;
  double marginal(double x) const override;
  double prior_mass(const ThetaSet& b) const override;
  double prior_quantile(double p) const override;
  GibbsState step(const GibbsState& s, Rng& rng) const override;
  bool strictly_positive_f() const override;
  double sup_marginal() const override;

  int n() const { return n_; }

  // Closed-form x-chain transition mass x -> x2, used by the oracle tests.
  double x_chain_prob(int x, int x2) const;

 private:
  int n_;
  SpaceRepr x_space_;
  SpaceRepr theta_space_;
};

// x | theta ~ Poisson(theta), theta ~ Exponential(1).
// m(x) = 2^{-(x+1)}; the posterior is Gamma(x + 1, 2).  The x space is
// truncated at n_max with certified tails.
class PoissonGammaModel : public TwoComponentModel {
 public:
  // n_max < 0 selects the smallest truncation with stationary tail < 1e-12.
  explicit PoissonGammaModel(int n_max = -1);

  std::string name() const override;
  const SpaceRepr& x_space() const override;
  const SpaceRepr& theta_space() const override;
  double log_f(double x, double theta) const override;
  double log_prior(double theta) const override;
  double marginal(double x) const override;
  double prior_mass(const ThetaSet& b) const override;
  double prior_quantile(double p) const override;
  GibbsState step(const GibbsState& s, Rng& rng) const override;
  bool strictly_positive_f() const override;
  double sup_marginal() const override;
  double stationary_tail() const override;
  double transition_row_tail(double x) const override;
  std::optional<DriftSpec> default_drift() const override;

  int n_max() const { return n_max_; }

  // Closed-form x-chain transition mass x -> k (negative binomial).
  double x_chain_prob(int x, int k) const;

 private:
  int n_max_;
  SpaceRepr x_space_;
  SpaceRepr theta_space_;
};

// x | theta ~ N(theta, sigma2), theta ~ N(0, tau2) with sigma2 + tau2 = 1/2.
// m is N(0, 1/2); the posterior is N(2 tau2 x, 2 tau2 sigma2) and the x chain
// is AR(1) with coefficient 2 tau2.
class GaussianModel : public TwoComponentModel {
 public:
  GaussianModel(double sigma2 = 0.25, double tau2 = 0.25,
                double half_width = 8.0, int quad_nodes = 256);

  std::string name() const override;
  const SpaceRepr& x_space() const override;
  const SpaceRepr& theta_space() const override;
  double log_f(double x, double theta) const override;
  double log_prior(double theta) const override;
  double marginal(double x) const override;
  double prior_mass(const ThetaSet& b) const override;
  double prior_quantile(double p) const override;
  GibbsState step(const GibbsState& s, Rng& rng) const override;
  bool strictly_positive_f() const override;
  double sup_marginal() const override;
  std::optional<DriftSpec> default_drift() const override;
  std::vector<double> x_eval_points() const override;

  double sigma2() const { return sigma2_; }
  double tau2() const { return tau2_; }
  // AR(1) coefficient of the x chain.
  double ar_coeff() const { return 2.0 * tau2_; }
  double step_var() const { return sigma2_ * (1.0 + 2.0 * tau2_); }
  double stationary_var() const { return sigma2_ / (1.0 - 2.0 * tau2_); }

 private:
  double sigma2_;
  double tau2_;
  SpaceRepr x_space_;
  SpaceRepr theta_space_;
};

// Fully tabulated model on finite x and theta grids.  Inputs are canonicalized
// through the joint mass f * (mu x pi): the stored prior is the theta marginal
// of the normalized joint and f is rederived from it, so inconsistent inputs
// are repaired rather than rejected (only negative entries and zero marginals
// are errors).
class FiniteModel : public TwoComponentModel {
 public:
  static FiniteModel from_tables(std::vector<double> x_points,
                                 std::vector<double> theta_points,
                                 std::vector<double> mu_weights,
                                 std::vector<double> pi_weights,
                                 std::vector<double> f_row_major,
                                 std::string name = "custom-finite");
  static FiniteModel from_json_file(const std::string& path);
  static FiniteModel from_json_text(const std::string& text);

  std::string name() const override;
  const SpaceRepr& x_space() const override;
  const SpaceRepr& theta_space() const override;
  double log_f(double x, double theta) const override;
  double log_prior(double theta) const override;
  double marginal(double x) const override;
  double prior_mass(const ThetaSet& b) const override;
  double prior_quantile(double p) const override;
  GibbsState step(const GibbsState& s, Rng& rng) const override;
  bool strictly_positive_f() const override;
  double sup_marginal() const override;

  std::size_t x_size() const { return x_points_.size(); }
  std::size_t theta_size() const { return theta_points_.size(); }
  // Density value by index, bypassing point lookup.
  double f_at(std::size_t xi, std::size_t ti) const;
  double prior_at(std::size_t ti) const;
  double mu_weight_at(std::size_t xi) const;

 private:
  FiniteModel(std::vector<double> x_points, std::vector<double> theta_points,
              std::vector<double> mu_weights, std::vector<double> pi_weights,
              std::vector<double> f_row_major, std::string name);

  std::string name_;
  std::vector<double> x_points_;
  std::vector<double> theta_points_;
  std::vector<double> mu_;      // base measure weights on x
  std::vector<double> prior_;   // pi masses (include theta weights)
  std::vector<double> f_;       // row-major f[xi * theta_size + ti]
  std::vector<double> m_;       // marginal masses m(x) * mu(x)
  SpaceRepr x_space_;
  SpaceRepr theta_space_;
};

// Three-component sampler on finite grids: x = (x1, x2) with a single theta
// block.  One scan updates theta | (x1, x2), then x2 | (x1, theta), then
// x1 | (x2, theta); the (x1, x2) pair is Markov.
class FiniteThreeComponentModel {
 public:
  // joint[i][j][k] proportional to the stationary mass of (x1 = i, x2 = j,
  // theta = k); normalized internally.  mu1/mu2 are base-measure weights on
  // the coordinate grids (empty = counting measure); densities are taken
  // against mu1 x mu2 x prior, so rescaling a base measure rescales f but
  // leaves the bound derived from it unchanged.
  static FiniteThreeComponentModel from_joint(
      std::vector<double> x1_points, std::vector<double> x2_points,
      std::vector<double> theta_points, std::vector<double> joint_row_major,
      std::vector<double> mu1_weights = {}, std::vector<double> mu2_weights = {},
      std::string name = "custom-3block");

  const std::string& name() const { return name_; }
  std::size_t x1_size() const { return x1_.size(); }
  std::size_t x2_size() const { return x2_.size(); }
  std::size_t theta_size() const { return theta_.size(); }
  const std::vector<double>& x1_points() const { return x1_; }
  const std::vector<double>& x2_points() const { return x2_; }
  const std::vector<double>& theta_points() const { return theta_; }

  // Stationary mass of (i, j, k); sums to 1.
  double joint_mass(std::size_t i, std::size_t j, std::size_t k) const;
  // Joint density f(x1, x2, theta) against mu1 x mu2 x prior.
  double f(std::size_t i, std::size_t j, std::size_t k) const;
  // Prior mass of theta = k (theta marginal of the joint).
  double prior(std::size_t k) const;
  // Density of the pair (x1, x2) against mu1 x mu2.
  double m(std::size_t i, std::size_t j) const;
  // Stationary mass of the pair.
  double pair_mass(std::size_t i, std::size_t j) const;
  // Density of (x1, theta) against mu1 x prior.
  double h(std::size_t i, std::size_t k) const;
  // Total base-measure mass of the x2 space.
  double mu2_total() const;

  bool strictly_positive_f() const;

  // One scan applied to the pair state (i, j); theta is integrated out.
  // Returns the transition probability to (i2, j2).
  double pair_transition(std::size_t i, std::size_t j, std::size_t i2,
                         std::size_t j2) const;

 private:
  FiniteThreeComponentModel(std::vector<double> x1, std::vector<double> x2,
                            std::vector<double> theta, std::vector<double> joint,
                            std::vector<double> mu1, std::vector<double> mu2,
                            std::string name);

  std::string name_;
  std::vector<double> x1_;
  std::vector<double> x2_;
  std::vector<double> theta_;
  std::vector<double> mu1_;
  std::vector<double> mu2_;
  std::vector<double> joint_;   // row-major [i][j][k], sums to 1
  std::vector<double> prior_;   // theta marginal masses
  std::vector<double> hmass_;   // [i][k] = sum_j joint
  std::vector<double> g2mass_;  // [j][k] = sum_i joint
  std::vector<double> mmass_;   // [i][j] = sum_k joint
};

// Registry facade used by the command-line front end.
std::unique_ptr<TwoComponentModel> make_builtin_model(
    const std::string& name, const std::vector<std::string>& params);
std::vector<std::string> builtin_model_names();

}  // namespace gibbscert
