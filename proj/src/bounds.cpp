#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gibbscert/bounds.hpp"
#include "gibbscert/errors.hpp"

namespace gibbscert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// E|N(mu, sd^2)|, the folded normal mean.
double folded_normal_mean(double mu, double sd) {
  return sd * std::sqrt(2.0 / M_PI) * std::exp(-mu * mu / (2.0 * sd * sd)) +
         mu * std::erf(mu / (sd * std::sqrt(2.0)));
}

// Delta values for the central quantile intervals [q_delta, q_{1-delta}].
// Log-spaced toward 0 and mirrored toward 1/2: the best interval hugs 0 for
// heavy-tailed priors and 1/2 for tight ones.
std::vector<double> delta_grid() {
  std::vector<double> g;
  const int half = 32;
  double lo = std::log(1e-6), hi = std::log(0.25);
  for (int i = 0; i < half; ++i) {
    double d = std::exp(lo + (hi - lo) * double(i) / (half - 1));
    g.push_back(d);
    g.push_back(0.5 - d);
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

ThetaInterval quantile_interval(const TwoComponentModel& model, double delta) {
  return ThetaInterval{model.prior_quantile(delta),
                       model.prior_quantile(1.0 - delta)};
}

ThetaSet full_theta_set(const TwoComponentModel& model) {
  if (model.theta_space().kind() == SpaceKind::finite) {
    std::size_t nt = model.theta_space().as_finite().points.size();
    ThetaIndexSet all;
    for (std::size_t i = 0; i < nt; ++i) all.indices.push_back(int(i));
    return all;
  }
  const auto& sp = model.theta_space().as_real();
  return ThetaInterval{sp.lo, sp.hi};
}

}  // namespace

std::vector<double> certified_theta_points(const TwoComponentModel& model,
                                           const ThetaSet& b) {
  if (const auto* idx = std::get_if<ThetaIndexSet>(&b)) {
    if (model.theta_space().kind() != SpaceKind::finite)
      throw domain_error("theta index sets need a finite theta space");
    const auto& pts = model.theta_space().as_finite().points;
    std::vector<double> out;
    for (int i : idx->indices) {
      if (i < 0 || std::size_t(i) >= pts.size())
        throw domain_error("theta index out of range");
      out.push_back(pts[i]);
    }
    return out;
  }
  return model.theta_eval_points(std::get<ThetaInterval>(b));
}

// --------------------------------------------------------------- BoundCurve

double BoundCurve::param(const std::string& key) const {
  for (const auto& kv : params)
    if (kv.first == key) return kv.second;
  throw domain_error("bound curve '" + kind + "': no parameter '" + key + "'");
}

bool BoundCurve::has_param(const std::string& key) const {
  for (const auto& kv : params)
    if (kv.first == key) return true;
  return false;
}

double BoundCurve::value(int ell) const {
  if (ell < ell_min) {
    std::ostringstream msg;
    msg << "bound curve '" << kind << "': not valid below ell = " << ell_min;
    throw domain_error(msg.str());
  }
  if (kind == "uniform" || kind == "prop4")
    return std::pow(uniform_rate, double(ell));
  if (kind == "rosenthal") {
    double eps = param("eps"), r = param("r"), t = param("t"), c = param("c");
    return std::pow(1.0 - eps, r * ell) + std::pow(t, double(ell)) * c;
  }
  if (kind == "dks_lower") return 0.5 * std::pow(param("beta1"), double(ell));
  if (kind == "dks_upper") {
    double b = param("beta1");
    return std::pow(b, ell - 0.5) / (1.0 - std::pow(b, 2.0 * ell - 1.0));
  }
  if (kind == "spectral") {
    double sum = 0.0;
    for (const auto& [beta, phi2] : spectral_terms)
      sum += std::pow(beta * beta, double(ell)) * phi2;
    return 0.5 * std::sqrt(sum);
  }
  throw domain_error("bound curve: unknown kind '" + kind + "'");
}

double BoundCurve::capped(int ell) const {
  return std::min(1.0, std::max(0.0, value(ell)));
}

std::vector<double> BoundCurve::sample(int ell_lo, int ell_hi) const {
  if (ell_hi < ell_lo) throw domain_error("bound curve: empty sample range");
  std::vector<double> out;
  out.reserve(ell_hi - ell_lo + 1);
  for (int ell = ell_lo; ell <= ell_hi; ++ell) out.push_back(value(ell));
  return out;
}

// -------------------------------------------------------- uniform certificate

std::vector<ThetaSet> candidate_theta_sets(const TwoComponentModel& model) {
  std::vector<ThetaSet> out;
  if (model.theta_space().kind() == SpaceKind::finite) {
    std::size_t nt = model.theta_space().as_finite().points.size();
    if (nt <= 10) {
      // Small enough to enumerate every nonempty subset.
      for (unsigned mask = 1; mask < (1u << nt); ++mask) {
        ThetaIndexSet s;
        for (std::size_t i = 0; i < nt; ++i)
          if (mask & (1u << i)) s.indices.push_back(int(i));
        out.push_back(std::move(s));
      }
    } else {
      for (std::size_t i = 0; i < nt; ++i)
        out.push_back(ThetaIndexSet{{int(i)}});
      out.push_back(full_theta_set(model));
    }
    return out;
  }
  for (double delta : delta_grid())
    out.push_back(quantile_interval(model, delta));
  return out;
}

double uniform_u_for_set(const TwoComponentModel& model, const ThetaSet& b) {
  // A positive infimum of f over all of X x B is only certifiable when the
  // x space is exactly represented; infinite or unbounded x spaces force the
  // infimum to zero (density mass escapes to infinity).
  if (model.x_space().kind() != SpaceKind::finite) return 0.0;
  std::vector<double> tpts = certified_theta_points(model, b);
  if (tpts.empty()) return 0.0;
  double inf_f = kInf;
  for (double x : model.x_eval_points())
    for (double t : tpts) inf_f = std::min(inf_f, model.f(x, t));
  if (!(inf_f > 0.0)) return 0.0;
  return model.prior_mass(b) * inf_f;
}

UniformCertificate best_uniform_certificate(const TwoComponentModel& model) {
  UniformCertificate best{0.0, 1.0, full_theta_set(model)};

  bool continuous = model.theta_space().kind() != SpaceKind::finite;
  double best_delta = -1.0;
  std::vector<double> deltas;
  if (continuous) deltas = delta_grid();

  if (continuous) {
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      ThetaInterval b = quantile_interval(model, deltas[i]);
      double u = uniform_u_for_set(model, b);
      if (u > best.u) {
        best.u = u;
        best.witness_b = b;
        best_delta = deltas[i];
      }
    }
  } else {
    for (const ThetaSet& b : candidate_theta_sets(model)) {
      double u = uniform_u_for_set(model, b);
      if (u > best.u) {
        best.u = u;
        best.witness_b = b;
      }
    }
  }

  if (continuous && best_delta > 0.0) {
    // Ternary refinement between the grid neighbors of the winner; u(delta)
    // is unimodal for quantile-interval families.
    auto it = std::find(deltas.begin(), deltas.end(), best_delta);
    std::size_t gi = std::size_t(it - deltas.begin());
    double lo = gi > 0 ? deltas[gi - 1] : deltas[gi] * 0.5;
    double hi = gi + 1 < deltas.size() ? deltas[gi + 1]
                                       : 0.5 * (deltas[gi] + 0.5);
    auto u_of = [&model](double d) {
      return uniform_u_for_set(model, quantile_interval(model, d));
    };
    for (int iter = 0; iter < 100; ++iter) {
      double m1 = lo + (hi - lo) / 3.0;
      double m2 = hi - (hi - lo) / 3.0;
      if (u_of(m1) < u_of(m2))
        lo = m1;
      else
        hi = m2;
    }
    double refined = 0.5 * (lo + hi);
    double u = u_of(refined);
    if (u > best.u) {
      best.u = u;
      best.witness_b = quantile_interval(model, refined);
    }
  }

  double sup = model.sup_marginal();
  best.rho = std::clamp(1.0 - best.u / sup, 0.0, 1.0);
  return best;
}

// ------------------------------------------------------------------- drift

double phi_value(PhiKind phi, double x) {
  return phi == PhiKind::identity ? x : std::abs(x);
}

double drift_expectation(const TwoComponentModel& model, PhiKind phi,
                         double x) {
  if (const auto* pg = dynamic_cast<const PoissonGammaModel*>(&model)) {
    // x >= 0 throughout, so identity and absolute value coincide.
    int xi = int(std::round(x));
    if (std::abs(x - xi) > 1e-9 || xi < 0)
      throw domain_error("drift_expectation: x must be a nonnegative integer");
    int n_max = pg->n_max();
    double total = 0.0;
    for (int k = 0; k <= n_max; ++k)
      total += phi_value(phi, double(k)) * pg->x_chain_prob(xi, k);
    // Certified upper bound on the drift mass past the grid: exact terms,
    // then a geometric majorant on k * pmf (the pmf ratio decreases in k).
    const int exact_terms = 40;
    int k = n_max + 1;
    for (; k <= n_max + exact_terms; ++k)
      total += double(k) * pg->x_chain_prob(xi, k);
    double ratio = (xi + k + 1.0) / (3.0 * (k + 1.0));
    double pk = pg->x_chain_prob(xi, k);
    total += pk * (k / (1.0 - ratio) + ratio / ((1.0 - ratio) * (1.0 - ratio)));
    return total;
  }
  if (const auto* bb = dynamic_cast<const BetaBinomialModel*>(&model)) {
    int xi = int(std::round(x));
    double total = 0.0;
    for (int x2 = 0; x2 <= bb->n(); ++x2)
      total += phi_value(phi, double(x2)) * bb->x_chain_prob(xi, x2);
    return total;
  }
  if (const auto* g = dynamic_cast<const GaussianModel*>(&model)) {
    if (phi != PhiKind::absolute_value)
      throw domain_error(
          "drift_expectation: identity drift needs a nonnegative x space");
    // One step is exactly x' ~ N(a x, step_var), so J|x| is a folded mean.
    return folded_normal_mean(g->ar_coeff() * x, std::sqrt(g->step_var()));
  }
  if (const auto* fm = dynamic_cast<const FiniteModel*>(&model)) {
    const auto& xs = fm->x_space().as_finite().points;
    std::size_t xi = 0;
    while (xi < xs.size() &&
           std::abs(xs[xi] - x) > 1e-12 * std::max(1.0, std::abs(x)))
      ++xi;
    if (xi == xs.size())
      throw domain_error("drift_expectation: x not on the model grid");
    double mx = fm->marginal(xs[xi]) * fm->mu_weight_at(xi);
    double total = 0.0;
    for (std::size_t ti = 0; ti < fm->theta_size(); ++ti) {
      double post =
          fm->f_at(xi, ti) * fm->mu_weight_at(xi) * fm->prior_at(ti) / mx;
      if (!(post > 0.0)) continue;
      for (std::size_t xj = 0; xj < fm->x_size(); ++xj)
        total += post * fm->f_at(xj, ti) * fm->mu_weight_at(xj) *
                 phi_value(phi, xs[xj]);
    }
    return total;
  }
  throw unsupported_error("drift_expectation: no evaluator for model '" +
                          model.name() + "'");
}

void verify_drift(const TwoComponentModel& model, const DriftCertificate& c,
                  double tol) {
  if (!(c.alpha >= 0.0))
    throw domain_error("verify_drift: alpha must be nonnegative");
  if (!(c.beta >= 0.0 && c.beta < 1.0))
    throw domain_error("verify_drift: beta must lie in [0, 1)");
  for (double x : model.x_eval_points()) {
    double lhs = drift_expectation(model, c.phi, x);
    double rhs = c.alpha + c.beta * phi_value(c.phi, x);
    if (lhs > rhs + tol) {
      std::ostringstream msg;
      msg << "drift certificate fails at x = " << x << ": (J phi)(x) = " << lhs
          << " exceeds alpha + beta phi(x) = " << rhs;
      throw certificate_error(msg.str());
    }
  }
}

// ------------------------------------------------------------- minorization

double minorization_epsilon(const TwoComponentModel& model, PhiKind phi,
                            double d, const ThetaSet& b) {
  if (!(d > 0.0)) throw domain_error("minorization: d must be positive");

  std::vector<double> eval = model.x_eval_points();
  double max_grid_phi = 0.0;
  for (double x : eval) max_grid_phi = std::max(max_grid_phi, phi_value(phi, x));

  std::vector<double> apts;
  const auto& xs = model.x_space();
  if (xs.kind() == SpaceKind::finite) {
    for (double x : eval)
      if (phi_value(phi, x) <= d) apts.push_back(x);
  } else {
    // On truncated or unbounded spaces the sublevel set must stay inside the
    // represented region, otherwise the infimum cannot be certified.
    if (d > max_grid_phi) {
      std::ostringstream msg;
      msg << "minorization: d = " << d
          << " reaches past the represented grid (max phi " << max_grid_phi
          << ")";
      throw domain_error(msg.str());
    }
    for (double x : eval)
      if (phi_value(phi, x) <= d) apts.push_back(x);
    if (xs.kind() == SpaceKind::real_1d) {
      if (phi != PhiKind::absolute_value)
        throw domain_error(
            "minorization: identity drift needs a nonnegative x space");
      // The sublevel set is [-d, d]; its endpoints pin the infimum for
      // densities unimodal in x.
      const auto& sp = xs.as_real();
      for (double x : {-d, d})
        if (x >= sp.lo && x <= sp.hi) apts.push_back(x);
    }
  }
  if (apts.empty())
    throw domain_error("minorization: the sublevel set misses the grid");

  std::vector<double> tpts = certified_theta_points(model, b);
  if (tpts.empty())
    throw domain_error("minorization: theta set has no certified points");

  double inf_f = kInf;
  for (double x : apts)
    for (double t : tpts) inf_f = std::min(inf_f, model.f(x, t));
  if (!(inf_f > 0.0)) return 0.0;

  double sup_m = 0.0;
  for (double x : apts) sup_m = std::max(sup_m, model.marginal(x));

  double eps = model.prior_mass(b) * inf_f / sup_m;
  return std::min(eps, 1.0);
}

RosenthalTValue rosenthal_t(double alpha, double beta, double d, double r) {
  if (!(alpha >= 0.0)) throw domain_error("rosenthal_t: alpha must be >= 0");
  if (!(beta >= 0.0 && beta < 1.0))
    throw domain_error("rosenthal_t: beta must lie in [0, 1)");
  if (!(r > 0.0 && r < 1.0))
    throw domain_error("rosenthal_t: r must lie in (0, 1)");
  double d_min = 2.0 * alpha / (1.0 - beta);
  if (!(d > d_min)) {
    std::ostringstream msg;
    msg << "rosenthal_t: d = " << d << " must strictly exceed 2 alpha / (1 - "
        << "beta) = " << d_min;
    throw domain_error(msg.str());
  }
  double log_t = r * std::log1p(2.0 * alpha + 2.0 * beta * d) +
                 (1.0 - r) * std::log1p(2.0 * alpha + beta * d) -
                 (1.0 - r) * std::log1p(d);
  double t = std::exp(log_t);
  return RosenthalTValue{t, t < 1.0};
}

// ------------------------------------------------------------------- curves

BoundCurve uniform_curve(const UniformCertificate& c) {
  BoundCurve curve;
  curve.kind = "uniform";
  curve.ell_min = 0;
  curve.uniform_rate = c.rho;
  curve.params = {{"u", c.u}, {"rho", c.rho}};
  return curve;
}

BoundCurve rosenthal_curve(const RosenthalCertificate& c, double phi_x0) {
  double psi0 = 1.0 + c.drift.alpha / (1.0 - c.drift.beta) + phi_x0;
  BoundCurve curve;
  curve.kind = "rosenthal";
  curve.ell_min = 0;
  curve.params = {{"eps", c.minor.epsilon}, {"r", c.r},
                  {"t", c.t},               {"c", psi0},
                  {"d", c.minor.d},         {"alpha", c.drift.alpha},
                  {"beta", c.drift.beta}};
  return curve;
}

BoundCurve spectral_curve(const SpectralData& sd, const TransitionMatrix& tm,
                          double x0) {
  if (tm.truncated)
    throw unsupported_error(
        "spectral_curve: needs the exact chain, not a truncation");
  std::size_t s = 0;
  while (s < tm.states.size() && std::abs(tm.states[s] - x0) > 1e-9) ++s;
  if (s == tm.states.size())
    throw domain_error("spectral_curve: start state is not on the grid");
  if (std::abs(sd.eigenvalues.front() - 1.0) > 1e-8)
    throw certificate_error(
        "spectral_curve: top eigenvalue is not 1; chain is not stochastic");
  BoundCurve curve;
  curve.kind = "spectral";
  curve.ell_min = 0;
  curve.params = {{"x0", x0}};
  for (std::size_t j = 1; j < sd.eigenvalues.size(); ++j) {
    double phi = sd.eigenfunctions(s, j);
    curve.spectral_terms.emplace_back(sd.eigenvalues[j], phi * phi);
  }
  return curve;
}

BoundCurve dks_lower_curve(int n) {
  if (n < 1) throw domain_error("dks curve: n must be >= 1");
  double beta1 = 1.0 - 2.0 / (n + 2.0);
  BoundCurve curve;
  curve.kind = "dks_lower";
  curve.ell_min = 1;
  curve.uniform_rate = beta1;
  curve.params = {{"beta1", beta1}, {"n", double(n)}};
  return curve;
}

BoundCurve dks_upper_curve(int n) {
  if (n < 1) throw domain_error("dks curve: n must be >= 1");
  double beta1 = 1.0 - 2.0 / (n + 2.0);
  BoundCurve curve;
  curve.kind = "dks_upper";
  curve.ell_min = 1;
  curve.uniform_rate = beta1;
  curve.params = {{"beta1", beta1}, {"n", double(n)}};
  return curve;
}

// --------------------------------------------------------- three components

double prop4_v(const FiniteThreeComponentModel& model,
               const std::vector<int>& b_indices) {
  if (b_indices.empty()) throw domain_error("prop4_v: empty theta set");
  std::size_t nt = model.theta_size();
  for (int k : b_indices)
    if (k < 0 || std::size_t(k) >= nt)
      throw domain_error("prop4_v: theta index out of range");

  double pi_b = 0.0;
  for (int k : b_indices) pi_b += model.prior(k);

  double inf_f = kInf;
  for (std::size_t i = 0; i < model.x1_size(); ++i)
    for (std::size_t j = 0; j < model.x2_size(); ++j)
      for (int k : b_indices) inf_f = std::min(inf_f, model.f(i, j, k));
  if (!(inf_f > 0.0)) return 0.0;

  double sup_h = 0.0;
  for (std::size_t i = 0; i < model.x1_size(); ++i)
    for (int k : b_indices) sup_h = std::max(sup_h, model.h(i, k));

  return model.mu2_total() * pi_b * inf_f * inf_f / sup_h;
}

ThreeComponentCertificate best_three_component_certificate(
    const FiniteThreeComponentModel& model) {
  std::size_t nt = model.theta_size();
  double sup_m = 0.0;
  for (std::size_t i = 0; i < model.x1_size(); ++i)
    for (std::size_t j = 0; j < model.x2_size(); ++j)
      sup_m = std::max(sup_m, model.m(i, j));

  ThreeComponentCertificate best;
  best.v = 0.0;
  best.sup_m = sup_m;
  best.rho = 1.0;
  for (std::size_t k = 0; k < nt; ++k) best.b_indices.push_back(int(k));

  auto consider = [&](const std::vector<int>& b) {
    double v = prop4_v(model, b);
    if (v > best.v) {
      best.v = v;
      best.b_indices = b;
    }
  };
  if (nt <= 16) {
    for (unsigned mask = 1; mask < (1u << nt); ++mask) {
      std::vector<int> b;
      for (std::size_t k = 0; k < nt; ++k)
        if (mask & (1u << k)) b.push_back(int(k));
      consider(b);
    }
  } else {
    for (std::size_t k = 0; k < nt; ++k) consider({int(k)});
    std::vector<int> all;
    for (std::size_t k = 0; k < nt; ++k) all.push_back(int(k));
    consider(all);
  }
  best.rho = std::clamp(1.0 - best.v / best.sup_m, 0.0, 1.0);
  return best;
}

BoundCurve prop4_curve(const ThreeComponentCertificate& c) {
  BoundCurve curve;
  curve.kind = "prop4";
  curve.ell_min = 0;
  curve.uniform_rate = c.rho;
  curve.params = {{"v", c.v}, {"rho", c.rho}, {"sup_m", c.sup_m}};
  return curve;
}

}  // namespace gibbscert
