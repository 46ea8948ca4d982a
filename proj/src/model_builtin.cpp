#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "gibbscert/errors.hpp"
#include "gibbscert/model.hpp"

namespace gibbscert {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Round a double holding a grid state to its integer index, rejecting
// off-grid values.
int as_index(double x, int lo, int hi, const char* what) {
  double r = std::round(x);
  if (std::abs(x - r) > 1e-9 || r < lo || r > hi) {
    std::ostringstream msg;
    msg << what << ": point " << x << " outside the represented grid";
    throw domain_error(msg.str());
  }
  return int(r);
}

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_beta_fn(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

double TwoComponentModel::f(double x, double theta) const {
  return std::exp(log_f(x, theta));
}

double TwoComponentModel::marginal(double x) const {
  // Generic quadrature fallback; the built-ins override with closed forms.
  const auto& ts = theta_space();
  double total = 0.0;
  if (ts.kind() == SpaceKind::real_1d) {
    const auto& sp = ts.as_real();
    for (std::size_t i = 0; i < sp.quad.nodes.size(); ++i)
      total += sp.quad.weights[i] * f(x, sp.quad.nodes[i]) *
               std::exp(log_prior(sp.quad.nodes[i]));
  } else if (ts.kind() == SpaceKind::finite) {
    const auto& sp = ts.as_finite();
    for (std::size_t i = 0; i < sp.points.size(); ++i)
      total += sp.weights[i] * f(x, sp.points[i]);
  } else {
    throw unsupported_error("marginal: countable theta spaces not supported");
  }
  if (!(total > 0.0) || !std::isfinite(total))
    throw numeric_error("marginal: quadrature produced a non-positive value",
                        total);
  return total;
}

double TwoComponentModel::log_posterior(double theta, double x) const {
  return log_f(x, theta) + log_prior(theta) - std::log(marginal(x));
}

double TwoComponentModel::prior_mass(const ThetaSet& b) const {
  if (const auto* interval = std::get_if<ThetaInterval>(&b)) {
    // Generic path: integrate the prior density over the interval with the
    // declared quadrature, clipping nodes to it.  Built-ins override with
    // exact distribution functions.
    const auto& sp = theta_space().as_real();
    double total = 0.0;
    for (std::size_t i = 0; i < sp.quad.nodes.size(); ++i) {
      double t = sp.quad.nodes[i];
      if (t >= interval->lo && t <= interval->hi)
        total += sp.quad.weights[i] * std::exp(log_prior(t));
    }
    return total;
  }
  throw domain_error("prior_mass: index sets need a finite theta space");
}

double TwoComponentModel::stationary_tail() const { return 0.0; }

double TwoComponentModel::transition_row_tail(double) const { return 0.0; }

std::optional<DriftSpec> TwoComponentModel::default_drift() const {
  return std::nullopt;
}

std::vector<double> TwoComponentModel::x_eval_points() const {
  return x_space().grid();
}

std::vector<double> TwoComponentModel::theta_eval_points(
    const ThetaInterval& b) const {
  // Quadrature nodes inside the interval plus both endpoints.  For the
  // built-in conditionals, which are unimodal in theta for fixed x, the
  // infimum over the interval sits at an endpoint, so this grid is exact.
  std::vector<double> pts;
  if (theta_space().kind() == SpaceKind::finite) {
    for (double t : theta_space().as_finite().points)
      if (t >= b.lo && t <= b.hi) pts.push_back(t);
    return pts;
  }
  const auto& sp = theta_space().as_real();
  for (double t : sp.quad.nodes)
    if (t >= b.lo && t <= b.hi) pts.push_back(t);
  if (b.lo >= sp.lo && b.lo <= sp.hi) pts.push_back(b.lo);
  if (b.hi >= sp.lo && b.hi <= sp.hi) pts.push_back(b.hi);
  return pts;
}

// ---------------------------------------------------------------- BetaBinomial

namespace {
SpaceRepr bb_x_space(int n) {
  if (n < 1) throw domain_error("beta-binomial: n must be >= 1");
  std::vector<double> pts(n + 1), wts(n + 1, 1.0);
  for (int i = 0; i <= n; ++i) pts[i] = double(i);
  return SpaceRepr::finite(std::move(pts), std::move(wts));
}
}  // namespace

BetaBinomialModel::BetaBinomialModel(int n)
    : n_(n),
      x_space_(bb_x_space(n)),
      theta_space_(SpaceRepr::real_1d(gauss_legendre(256, 0.0, 1.0), 0.0, 1.0,
                                      /*unbounded=*/false)) {}

std::string BetaBinomialModel::name() const {
  return "beta-binomial(n=" + std::to_string(n_) + ")";
}

const SpaceRepr& BetaBinomialModel::x_space() const { return x_space_; }
const SpaceRepr& BetaBinomialModel::theta_space() const { return theta_space_; }

double BetaBinomialModel::log_f(double x, double theta) const {
  int xi = as_index(x, 0, n_, "beta-binomial log_f");
  if (!(theta >= 0.0 && theta <= 1.0))
    throw domain_error("beta-binomial log_f: theta outside [0,1]");
  double lp = log_choose(n_, xi);
  lp += (xi == 0) ? 0.0 : xi * std::log(theta);
  lp += (xi == n_) ? 0.0 : (n_ - xi) * std::log1p(-theta);
  return lp;
}

double BetaBinomialModel::log_prior(double theta) const {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw domain_error("beta-binomial log_prior: theta outside [0,1]");
  return 0.0;
}

double BetaBinomialModel::marginal(double x) const {
  as_index(x, 0, n_, "beta-binomial marginal");
  return 1.0 / (n_ + 1.0);
}

double BetaBinomialModel::prior_mass(const ThetaSet& b) const {
  const auto* interval = std::get_if<ThetaInterval>(&b);
  if (!interval)
    throw domain_error("beta-binomial prior_mass: expected an interval");
  double lo = std::max(0.0, interval->lo);
  double hi = std::min(1.0, interval->hi);
  return std::max(0.0, hi - lo);
}

double BetaBinomialModel::prior_quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0))
    throw domain_error("beta-binomial prior_quantile: p outside [0,1]");
  return p;
}

GibbsState BetaBinomialModel::step(const GibbsState& s, Rng& rng) const {
  int xi = as_index(s.x, 0, n_, "beta-binomial step");
  double theta = rng.beta_int(xi + 1, n_ - xi + 1);
  int x2 = rng.binomial(n_, theta);
  return GibbsState{double(x2), theta};
}

bool BetaBinomialModel::strictly_positive_f() const {
  // Positive on all of X x (0,1); the endpoints are prior-null.
  return true;
}

double BetaBinomialModel::sup_marginal() const { return 1.0 / (n_ + 1.0); }

double BetaBinomialModel::x_chain_prob(int x, int x2) const {
  if (x < 0 || x > n_ || x2 < 0 || x2 > n_)
    throw domain_error("beta-binomial x_chain_prob: state outside grid");
  // Integrate Binomial(n, theta) at x2 against the Beta(x+1, n-x+1) posterior.
  double lp = log_choose(n_, x2) + log_beta_fn(x + x2 + 1.0, 2.0 * n_ - x - x2 + 1.0) -
              log_beta_fn(x + 1.0, n_ - x + 1.0);
  return std::exp(lp);
}

// ---------------------------------------------------------------- PoissonGamma

namespace {
int auto_n_max_for_tail() {
  // Smallest N with stationary tail 2^{-(N+1)} below 1e-12.
  int n = 0;
  while (std::exp2(-(n + 1.0)) >= 1e-12) ++n;
  return n;
}

SpaceRepr pg_x_space(int n_max) {
  if (n_max < 1) throw domain_error("poisson-gamma: n_max must be >= 1");
  return SpaceRepr::truncated_countable(n_max, std::exp2(-(n_max + 1.0)));
}

SpaceRepr pg_theta_space(int n_max) {
  // Sized so the posteriors Gamma(x+1, 2) of every represented x keep their
  // mass far inside: mean (n_max+1)/2, sd sqrt(n_max+1)/2.
  double hi = 0.5 * (n_max + 1.0) + 6.0 * std::sqrt(n_max + 1.0) + 25.0;
  return SpaceRepr::real_1d(gauss_legendre(256, 0.0, hi), 0.0, hi,
                            /*unbounded=*/true);
}
}  // namespace

PoissonGammaModel::PoissonGammaModel(int n_max)
    : n_max_(n_max < 0 ? auto_n_max_for_tail() : n_max),
      x_space_(pg_x_space(n_max_)),
      theta_space_(pg_theta_space(n_max_)) {}

std::string PoissonGammaModel::name() const {
  return "poisson-gamma(n_max=" + std::to_string(n_max_) + ")";
}

const SpaceRepr& PoissonGammaModel::x_space() const { return x_space_; }
const SpaceRepr& PoissonGammaModel::theta_space() const { return theta_space_; }

double PoissonGammaModel::log_f(double x, double theta) const {
  int xi = as_index(x, 0, n_max_, "poisson-gamma log_f");
  if (!(theta >= 0.0))
    throw domain_error("poisson-gamma log_f: theta must be >= 0");
  if (theta == 0.0) return xi == 0 ? 0.0 : kNegInf;
  return -theta + xi * std::log(theta) - std::lgamma(xi + 1.0);
}

double PoissonGammaModel::log_prior(double theta) const {
  if (!(theta >= 0.0))
    throw domain_error("poisson-gamma log_prior: theta must be >= 0");
  return -theta;
}

double PoissonGammaModel::marginal(double x) const {
  int xi = as_index(x, 0, n_max_, "poisson-gamma marginal");
  return std::exp2(-(xi + 1.0));
}

double PoissonGammaModel::prior_mass(const ThetaSet& b) const {
  const auto* interval = std::get_if<ThetaInterval>(&b);
  if (!interval)
    throw domain_error("poisson-gamma prior_mass: expected an interval");
  double lo = std::max(0.0, interval->lo);
  double hi = std::max(lo, interval->hi);
  return std::exp(-lo) - std::exp(-hi);
}

double PoissonGammaModel::prior_quantile(double p) const {
  if (!(p >= 0.0 && p < 1.0))
    throw domain_error("poisson-gamma prior_quantile: p outside [0,1)");
  return -std::log1p(-p);
}

GibbsState PoissonGammaModel::step(const GibbsState& s, Rng& rng) const {
  // The sampler follows the untruncated chain; truncation only affects the
  // materialized matrices.
  double x = std::round(s.x);
  if (std::abs(s.x - x) > 1e-9 || x < 0.0)
    throw domain_error("poisson-gamma step: x must be a nonnegative integer");
  double theta = rng.gamma_int(int(x) + 1, 2.0);
  int x2 = rng.poisson(theta);
  return GibbsState{double(x2), theta};
}

bool PoissonGammaModel::strictly_positive_f() const {
  // Positive on X x (0, inf); theta = 0 is prior-null.
  return true;
}

double PoissonGammaModel::sup_marginal() const { return 0.5; }

double PoissonGammaModel::stationary_tail() const {
  return std::exp2(-(n_max_ + 1.0));
}

double PoissonGammaModel::transition_row_tail(double x) const {
  // Certified bound on the mass the negative-binomial row sends past n_max:
  // a block of exact pmf terms, then a geometric majorant (the pmf ratio
  // (x + k + 1) / (3 (k + 1)) decreases in k).
  int xi = as_index(x, 0, n_max_, "poisson-gamma row tail");
  const int exact_terms = 40;
  double tail = 0.0;
  int k = n_max_ + 1;
  for (; k <= n_max_ + exact_terms; ++k) tail += x_chain_prob(xi, k);
  double ratio = (xi + k + 1.0) / (3.0 * (k + 1.0));
  tail += x_chain_prob(xi, k) / (1.0 - ratio);
  return tail;
}

std::optional<DriftSpec> PoissonGammaModel::default_drift() const {
  return DriftSpec{PhiKind::identity, 0.5, 0.5};
}

double PoissonGammaModel::x_chain_prob(int x, int k) const {
  if (x < 0 || k < 0)
    throw domain_error("poisson-gamma x_chain_prob: negative state");
  // Gamma(x+1, 2) posterior pushed through the Poisson likelihood gives a
  // negative binomial row: C(x+k, k) (2/3)^{x+1} (1/3)^k.
  double lp = log_choose(x + k, k) + (x + 1.0) * std::log(2.0 / 3.0) +
              k * std::log(1.0 / 3.0);
  return std::exp(lp);
}

// -------------------------------------------------------------------- Gaussian

namespace {
void gauss_validate(double sigma2, double tau2) {
  if (!(sigma2 > 0.0) || !(tau2 > 0.0))
    throw domain_error("gaussian: variances must be positive");
  if (std::abs(sigma2 + tau2 - 0.5) > 1e-12)
    throw domain_error(
        "gaussian: requires sigma2 + tau2 = 1/2 (the conjugate normalization "
        "behind the closed-form posterior)");
}

SpaceRepr gauss_x_space(double sigma2, double tau2, double half_width,
                        int quad_nodes) {
  gauss_validate(sigma2, tau2);
  double x_hi = half_width * std::sqrt(sigma2 + tau2);
  return SpaceRepr::real_1d(gauss_legendre(quad_nodes, -x_hi, x_hi), -x_hi,
                            x_hi, /*unbounded=*/true);
}

SpaceRepr gauss_theta_space(double sigma2, double tau2, double half_width,
                            int quad_nodes) {
  // Wide enough to hold the prior and every posterior reachable from the
  // represented x domain out to half_width posterior deviations.
  double x_hi = half_width * std::sqrt(sigma2 + tau2);
  double sd_post = std::sqrt(2.0 * tau2 * sigma2);
  double th_hi = std::max(half_width * std::sqrt(tau2),
                          2.0 * tau2 * x_hi + half_width * sd_post);
  return SpaceRepr::real_1d(gauss_legendre(quad_nodes, -th_hi, th_hi), -th_hi,
                            th_hi, /*unbounded=*/true);
}
}  // namespace

GaussianModel::GaussianModel(double sigma2, double tau2, double half_width,
                             int quad_nodes)
    : sigma2_(sigma2),
      tau2_(tau2),
      x_space_(gauss_x_space(sigma2, tau2, half_width, quad_nodes)),
      theta_space_(gauss_theta_space(sigma2, tau2, half_width, quad_nodes)) {}

std::string GaussianModel::name() const {
  std::ostringstream s;
  s << "gaussian(sigma2=" << sigma2_ << ",tau2=" << tau2_ << ")";
  return s.str();
}

const SpaceRepr& GaussianModel::x_space() const { return x_space_; }
const SpaceRepr& GaussianModel::theta_space() const { return theta_space_; }

double GaussianModel::log_f(double x, double theta) const {
  double d = x - theta;
  return -0.5 * std::log(2.0 * M_PI * sigma2_) - d * d / (2.0 * sigma2_);
}

double GaussianModel::log_prior(double theta) const {
  return -0.5 * std::log(2.0 * M_PI * tau2_) - theta * theta / (2.0 * tau2_);
}

double GaussianModel::marginal(double x) const {
  double v = sigma2_ + tau2_;
  return std::exp(-x * x / (2.0 * v)) / std::sqrt(2.0 * M_PI * v);
}

double GaussianModel::prior_mass(const ThetaSet& b) const {
  const auto* interval = std::get_if<ThetaInterval>(&b);
  if (!interval)
    throw domain_error("gaussian prior_mass: expected an interval");
  double sd = std::sqrt(tau2_);
  return normal_cdf(interval->hi / sd) - normal_cdf(interval->lo / sd);
}

double GaussianModel::prior_quantile(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw domain_error("gaussian prior_quantile: p outside (0,1)");
  // Bisection on the normal CDF: deterministic and accurate to ~1e-16.
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return std::sqrt(tau2_) * 0.5 * (lo + hi);
}

GibbsState GaussianModel::step(const GibbsState& s, Rng& rng) const {
  double theta = 2.0 * tau2_ * s.x +
                 std::sqrt(2.0 * tau2_ * sigma2_) * rng.normal();
  double x2 = theta + std::sqrt(sigma2_) * rng.normal();
  return GibbsState{x2, theta};
}

bool GaussianModel::strictly_positive_f() const { return true; }

double GaussianModel::sup_marginal() const {
  return 1.0 / std::sqrt(2.0 * M_PI * (sigma2_ + tau2_));
}

std::optional<DriftSpec> GaussianModel::default_drift() const {
  double root = std::sqrt(2.0 / M_PI);
  double alpha = std::sqrt(sigma2_) * root +
                 std::sqrt(2.0) * std::sqrt(sigma2_) * std::sqrt(tau2_) * root;
  return DriftSpec{PhiKind::absolute_value, alpha, 2.0 * tau2_};
}

std::vector<double> GaussianModel::x_eval_points() const {
  // The marginal mode at 0 is not a quadrature node; include it so grid
  // suprema of m are exact.
  std::vector<double> pts = x_space_.grid();
  pts.push_back(0.0);
  std::sort(pts.begin(), pts.end());
  return pts;
}

// -------------------------------------------------------------------- registry

std::vector<std::string> builtin_model_names() {
  return {"beta-binomial", "poisson-gamma", "gaussian"};
}

std::unique_ptr<TwoComponentModel> make_builtin_model(
    const std::string& name, const std::vector<std::string>& params) {
  // Parse key=value pairs up front so misspelled keys fail loudly instead of
  // silently falling back to defaults.
  std::map<std::string, double> parsed;
  for (const auto& kv : params) {
    auto pos = kv.find('=');
    if (pos == std::string::npos)
      throw domain_error("model parameter '" + kv + "' is not key=value");
    try {
      parsed[kv.substr(0, pos)] = std::stod(kv.substr(pos + 1));
    } catch (const std::exception&) {
      throw domain_error("model parameter '" + kv + "' has a non-numeric value");
    }
  }
  static const std::map<std::string, std::vector<std::string>> known = {
      {"beta-binomial", {"n"}},
      {"poisson-gamma", {"n_max"}},
      {"gaussian", {"sigma2", "tau2"}},
  };
  if (auto it = known.find(name); it != known.end()) {
    for (const auto& [key, value] : parsed) {
      (void)value;
      if (std::find(it->second.begin(), it->second.end(), key) ==
          it->second.end())
        throw domain_error("model " + name + " does not take parameter '" +
                           key + "'");
    }
  }
  auto get = [&parsed](const std::string& key) -> std::optional<double> {
    auto it = parsed.find(key);
    if (it == parsed.end()) return std::nullopt;
    return it->second;
  };
  if (name == "beta-binomial") {
    auto n = get("n");
    if (!n) throw domain_error("beta-binomial requires n");
    return std::make_unique<BetaBinomialModel>(int(*n));
  }
  if (name == "poisson-gamma") {
    auto nm = get("n_max");
    return std::make_unique<PoissonGammaModel>(nm ? int(*nm) : -1);
  }
  if (name == "gaussian") {
    double s2 = get("sigma2").value_or(0.25);
    double t2 = get("tau2").value_or(0.25);
    return std::make_unique<GaussianModel>(s2, t2);
  }
  throw domain_error("unknown model: " + name);
}

}  // namespace gibbscert
