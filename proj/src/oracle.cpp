#include <algorithm>
#include <cmath>
#include <sstream>

#include "gibbscert/errors.hpp"
#include "gibbscert/oracle.hpp"

namespace gibbscert {

namespace {

double normal_cdf_scaled(double x, double mu, double var) {
  return 0.5 * std::erfc(-(x - mu) / std::sqrt(2.0 * var));
}

}  // namespace

std::vector<double> exact_tv_finite(const TransitionMatrix& tm, int x0_index,
                                    int ell_max) {
  if (tm.truncated)
    throw domain_error("exact_tv_finite: use exact_tv_truncated for truncated chains");
  if (x0_index < 0 || std::size_t(x0_index) >= tm.size())
    throw domain_error("exact_tv_finite: start index out of range");
  if (ell_max < 0) throw domain_error("exact_tv_finite: negative horizon");

  std::size_t n = tm.size();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v[x0_index] = 1.0;
  std::vector<double> tv(ell_max + 1);
  for (int ell = 0;; ++ell) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += std::abs(v[j] - tm.stationary[j]);
    tv[ell] = 0.5 * sum;
    if (ell == ell_max) break;
    v = tm.P.transpose() * v;
  }
  return tv;
}

TruncatedTVResult exact_tv_truncated(const TransitionMatrix& tm, int x0_index,
                                     int ell_max, double precision) {
  if (!tm.truncated)
    throw domain_error("exact_tv_truncated: chain is not truncated");
  if (x0_index < 0 || std::size_t(x0_index) >= tm.size())
    throw domain_error("exact_tv_truncated: start index out of range");
  if (ell_max < 0) throw domain_error("exact_tv_truncated: negative horizon");

  std::size_t n = tm.size();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v[x0_index] = 1.0;
  TruncatedTVResult out;
  out.tv.resize(ell_max + 1);
  out.defect.resize(ell_max + 1);
  double defect = 0.0;
  for (int ell = 0;; ++ell) {
    // Lower edge: positive parts against the true stationary masses.  The
    // kept vector only underestimates the true law, so dropping mass can
    // only shrink the positive parts, never inflate them.
    double plus = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      plus += std::max(0.0, v[j] - tm.stationary[j]);
    out.tv[ell] = TVInterval{plus, std::min(1.0, plus + defect)};
    out.defect[ell] = defect;
    if (ell == ell_max) break;
    for (std::size_t j = 0; j < n; ++j) defect += v[j] * tm.row_leak[j];
    v = tm.P.transpose() * v;
  }
  if (out.defect.back() > precision) {
    std::ostringstream msg;
    msg << "truncated TV enclosure: defect " << out.defect.back()
        << " exceeds the requested precision " << precision;
    // A fixed widening of the box shrinks both the per-step leak and the
    // stationary tail geometrically; 40 extra states cuts 2^-k mass by ~1e12.
    throw truncation_error(msg.str(), out.defect.back(), int(tm.size()) + 40);
  }
  return out;
}

double exact_tv_gaussian(double a, double step_var, double stat_var, double x0,
                         int ell) {
  if (!(std::abs(a) < 1.0))
    throw domain_error("exact_tv_gaussian: |a| must be below 1");
  if (!(step_var > 0.0) || !(stat_var > 0.0))
    throw domain_error("exact_tv_gaussian: variances must be positive");
  if (ell < 0) throw domain_error("exact_tv_gaussian: negative step count");
  if (ell == 0) return 1.0;  // a point mass against a density

  double mu1 = std::pow(a, ell) * x0;
  double v1 = step_var * (1.0 - std::pow(a * a, ell)) / (1.0 - a * a);
  double mu2 = 0.0, v2 = stat_var;

  auto diff_at = [&](double s) {
    return normal_cdf_scaled(s, mu1, v1) - normal_cdf_scaled(s, mu2, v2);
  };

  if (std::abs(v1 - v2) <= 1e-14 * std::max(v1, v2)) {
    // Equal variances: a single crossing at the midpoint.
    double sd = std::sqrt(0.5 * (v1 + v2));
    return std::erf(std::abs(mu1 - mu2) / (2.0 * sd * std::sqrt(2.0)));
  }

  // The densities cross where a quadratic in the state vanishes; its two
  // roots split the line into three signed pieces whose CDF gaps add up.
  double qa = 0.5 / v2 - 0.5 / v1;
  double qb = mu1 / v1 - mu2 / v2;
  double qc =
      mu2 * mu2 / (2.0 * v2) - mu1 * mu1 / (2.0 * v1) - 0.5 * std::log(v1 / v2);
  double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) disc = 0.0;
  double root = std::sqrt(disc);
  double s1 = (-qb - root) / (2.0 * qa);
  double s2 = (-qb + root) / (2.0 * qa);
  return std::abs(diff_at(s1)) + std::abs(diff_at(s2));
}

namespace {

int state_index(const TransitionMatrix& tm, double x0) {
  for (std::size_t i = 0; i < tm.size(); ++i)
    if (std::abs(tm.states[i] - x0) <= 1e-9) return int(i);
  throw domain_error("tv sandwich: start state is not on the chain grid");
}

}  // namespace

TVSandwich bivariate_tv_sandwich(const TwoComponentModel& model, double x0,
                                 int ell_max) {
  if (ell_max < 1) throw domain_error("tv sandwich: need ell_max >= 1");
  TVSandwich s;
  s.x0 = x0;
  s.lower.assign(ell_max + 1, 0.0);
  s.upper.assign(ell_max + 1, 0.0);

  if (const auto* g = dynamic_cast<const GaussianModel*>(&model)) {
    s.method = "gaussian-cdf";
    s.error_budget = 1e-13;
    for (int ell = 1; ell <= ell_max; ++ell) {
      s.lower[ell] = exact_tv_gaussian(g->ar_coeff(), g->step_var(),
                                       g->stationary_var(), x0, ell);
      s.upper[ell] = exact_tv_gaussian(g->ar_coeff(), g->step_var(),
                                       g->stationary_var(), x0, ell - 1);
    }
    return s;
  }

  TransitionMatrix tm = x_chain_matrix(model);
  int idx = state_index(tm, x0);
  if (tm.truncated) {
    s.method = "truncated-matrix";
    TruncatedTVResult r = exact_tv_truncated(tm, idx, ell_max);
    // Each edge is exact only up to the mass that has escaped the box by
    // that step, so the final defect is the honest width of the enclosure.
    s.error_budget = r.defect.empty() ? 0.0 : r.defect.back();
    for (int ell = 1; ell <= ell_max; ++ell) {
      s.lower[ell] = r.tv[ell].lower;
      s.upper[ell] = r.tv[ell - 1].upper;
    }
  } else {
    s.method = "finite-matrix";
    s.error_budget = 0.0;
    std::vector<double> tv = exact_tv_finite(tm, idx, ell_max);
    for (int ell = 1; ell <= ell_max; ++ell) {
      s.lower[ell] = tv[ell];
      s.upper[ell] = tv[ell - 1];
    }
  }
  return s;
}

TVSandwich bivariate_tv_sandwich(const FiniteThreeComponentModel& model,
                                 int i0, int j0, int ell_max) {
  if (ell_max < 1) throw domain_error("tv sandwich: need ell_max >= 1");
  if (i0 < 0 || std::size_t(i0) >= model.x1_size() || j0 < 0 ||
      std::size_t(j0) >= model.x2_size())
    throw domain_error("tv sandwich: start pair out of range");
  TransitionMatrix tm = pair_chain_matrix(model);
  int idx = i0 * int(model.x2_size()) + j0;
  std::vector<double> tv = exact_tv_finite(tm, idx, ell_max);
  TVSandwich s;
  s.x0 = double(idx);
  s.method = "pair-matrix";
  s.error_budget = 0.0;
  s.lower.assign(ell_max + 1, 0.0);
  s.upper.assign(ell_max + 1, 0.0);
  for (int ell = 1; ell <= ell_max; ++ell) {
    s.lower[ell] = tv[ell];
    s.upper[ell] = tv[ell - 1];
  }
  return s;
}

SimulationSummary simulate_chain(const TwoComponentModel& model, double x0,
                                 int ell, int n_chains, std::uint64_t seed) {
  if (ell < 0) throw domain_error("simulate_chain: negative step count");
  if (n_chains < 1) throw domain_error("simulate_chain: need at least one chain");

  SimulationSummary out;
  out.n_chains = n_chains;
  out.steps = ell;
  out.seed = seed;
  out.terminal_x.reserve(n_chains);
  out.terminal_theta.reserve(n_chains);
  for (int i = 0; i < n_chains; ++i) {
    Rng rng(seed ^ std::uint64_t(i));
    GibbsState state{x0, 0.0};
    for (int step = 0; step < ell; ++step) state = model.step(state, rng);
    out.terminal_x.push_back(state.x);
    out.terminal_theta.push_back(state.theta);
  }

  auto moments = [n_chains](const std::vector<double>& v, double& mean,
                            double& var, double& se) {
    mean = 0.0;
    for (double x : v) mean += x;
    mean /= n_chains;
    var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var = n_chains > 1 ? var / (n_chains - 1) : 0.0;
    se = std::sqrt(var / n_chains);
  };
  moments(out.terminal_x, out.mean_x, out.var_x, out.se_x);
  moments(out.terminal_theta, out.mean_theta, out.var_theta, out.se_theta);
  return out;
}

}  // namespace gibbscert
