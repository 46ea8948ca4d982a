#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "gibbscert/errors.hpp"
#include "gibbscert/model.hpp"

namespace gibbscert {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::size_t find_point(const std::vector<double>& points, double p,
                       const char* what) {
  for (std::size_t i = 0; i < points.size(); ++i)
    if (std::abs(points[i] - p) <= 1e-12 * std::max(1.0, std::abs(points[i])))
      return i;
  std::ostringstream msg;
  msg << what << ": point " << p << " not on the grid";
  throw domain_error(msg.str());
}

}  // namespace

FiniteModel FiniteModel::from_tables(std::vector<double> x_points,
                                     std::vector<double> theta_points,
                                     std::vector<double> mu_weights,
                                     std::vector<double> pi_weights,
                                     std::vector<double> f_row_major,
                                     std::string name) {
  return FiniteModel(std::move(x_points), std::move(theta_points),
                     std::move(mu_weights), std::move(pi_weights),
                     std::move(f_row_major), std::move(name));
}

FiniteModel::FiniteModel(std::vector<double> x_points,
                         std::vector<double> theta_points,
                         std::vector<double> mu_weights,
                         std::vector<double> pi_weights,
                         std::vector<double> f_row_major, std::string name)
    : name_(std::move(name)),
      x_points_(std::move(x_points)),
      theta_points_(std::move(theta_points)),
      mu_(std::move(mu_weights)),
      x_space_(SpaceRepr::finite({0.0}, {1.0})),
      theta_space_(SpaceRepr::finite({0.0}, {1.0})) {
  std::size_t nx = x_points_.size();
  std::size_t nt = theta_points_.size();
  if (nx == 0 || nt == 0) throw domain_error("finite model: empty grid");
  if (mu_.size() != nx || pi_weights.size() != nt ||
      f_row_major.size() != nx * nt)
    throw domain_error("finite model: table sizes do not match the grids");
  for (double v : mu_)
    if (!(v > 0.0)) throw domain_error("finite model: mu weights must be positive");
  for (double v : pi_weights)
    if (v < 0.0) throw domain_error("finite model: negative prior weight");
  for (double v : f_row_major)
    if (v < 0.0) throw domain_error("finite model: negative density entry");

  // Canonicalize through the joint mass M = f * (mu x pi), normalized to 1.
  // The stored prior is the theta marginal of M and f is rederived against
  // mu x prior, so inconsistent inputs are repaired rather than trusted.
  std::vector<double> joint(nx * nt);
  double total = 0.0;
  for (std::size_t xi = 0; xi < nx; ++xi)
    for (std::size_t ti = 0; ti < nt; ++ti) {
      double mass = f_row_major[xi * nt + ti] * mu_[xi] * pi_weights[ti];
      joint[xi * nt + ti] = mass;
      total += mass;
    }
  if (!(total > 0.0)) throw domain_error("finite model: joint mass is zero");
  for (double& v : joint) v /= total;

  m_.assign(nx, 0.0);
  prior_.assign(nt, 0.0);
  for (std::size_t xi = 0; xi < nx; ++xi)
    for (std::size_t ti = 0; ti < nt; ++ti) {
      m_[xi] += joint[xi * nt + ti];
      prior_[ti] += joint[xi * nt + ti];
    }
  for (double v : m_)
    if (!(v > 0.0)) throw domain_error("finite model: zero x marginal");
  for (double v : prior_)
    if (!(v > 0.0)) throw domain_error("finite model: zero theta marginal");

  f_.resize(nx * nt);
  for (std::size_t xi = 0; xi < nx; ++xi)
    for (std::size_t ti = 0; ti < nt; ++ti)
      f_[xi * nt + ti] = joint[xi * nt + ti] / (mu_[xi] * prior_[ti]);

  x_space_ = SpaceRepr::finite(x_points_, mu_);
  theta_space_ = SpaceRepr::finite(theta_points_, prior_);
}

FiniteModel FiniteModel::from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw domain_error(std::string("model config: invalid JSON: ") + e.what());
  }
  auto require = [&doc](const char* key) -> const nlohmann::json& {
    if (!doc.contains(key))
      throw domain_error(std::string("model config: missing key '") + key + "'");
    return doc.at(key);
  };
  auto as_vector = [](const nlohmann::json& j,
                      const char* key) -> std::vector<double> {
    if (!j.is_array())
      throw domain_error(std::string("model config: '") + key +
                         "' must be an array");
    std::vector<double> out;
    for (const auto& v : j) {
      if (!v.is_number())
        throw domain_error(std::string("model config: '") + key +
                           "' must contain numbers");
      out.push_back(v.get<double>());
    }
    return out;
  };

  std::vector<double> x = as_vector(require("x_points"), "x_points");
  std::vector<double> th = as_vector(require("theta_points"), "theta_points");
  std::vector<double> mu = as_vector(require("mu_weights"), "mu_weights");
  std::vector<double> pi = as_vector(require("pi_weights"), "pi_weights");

  const auto& fj = require("f");
  std::vector<double> f;
  if (fj.is_array() && !fj.empty() && fj.front().is_array()) {
    // Nested rows, one per x point.
    for (const auto& row : fj) {
      std::vector<double> r = as_vector(row, "f");
      f.insert(f.end(), r.begin(), r.end());
    }
  } else {
    f = as_vector(fj, "f");
  }

  std::string name = doc.value("name", std::string("custom-finite"));
  return from_tables(std::move(x), std::move(th), std::move(mu), std::move(pi),
                     std::move(f), std::move(name));
}

FiniteModel FiniteModel::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("model config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string FiniteModel::name() const { return name_; }
const SpaceRepr& FiniteModel::x_space() const { return x_space_; }
const SpaceRepr& FiniteModel::theta_space() const { return theta_space_; }

double FiniteModel::log_f(double x, double theta) const {
  std::size_t xi = find_point(x_points_, x, "finite log_f");
  std::size_t ti = find_point(theta_points_, theta, "finite log_f");
  double v = f_[xi * theta_points_.size() + ti];
  return v > 0.0 ? std::log(v) : kNegInf;
}

double FiniteModel::log_prior(double theta) const {
  std::size_t ti = find_point(theta_points_, theta, "finite log_prior");
  return std::log(prior_[ti]);
}

double FiniteModel::marginal(double x) const {
  std::size_t xi = find_point(x_points_, x, "finite marginal");
  return m_[xi] / mu_[xi];
}

double FiniteModel::prior_mass(const ThetaSet& b) const {
  double total = 0.0;
  if (const auto* idx = std::get_if<ThetaIndexSet>(&b)) {
    for (int i : idx->indices) {
      if (i < 0 || std::size_t(i) >= prior_.size())
        throw domain_error("finite prior_mass: index out of range");
      total += prior_[i];
    }
  } else {
    const auto& interval = std::get<ThetaInterval>(b);
    for (std::size_t ti = 0; ti < theta_points_.size(); ++ti)
      if (theta_points_[ti] >= interval.lo && theta_points_[ti] <= interval.hi)
        total += prior_[ti];
  }
  return total;
}

double FiniteModel::prior_quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0))
    throw domain_error("finite prior_quantile: p outside [0,1]");
  std::vector<std::size_t> order(theta_points_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    return theta_points_[a] < theta_points_[b];
  });
  double cum = 0.0;
  for (std::size_t ti : order) {
    cum += prior_[ti];
    if (cum >= p - 1e-15) return theta_points_[ti];
  }
  return theta_points_[order.back()];
}

GibbsState FiniteModel::step(const GibbsState& s, Rng& rng) const {
  std::size_t xi = find_point(x_points_, s.x, "finite step");
  std::size_t nt = theta_points_.size();
  // theta' from the posterior row, then x' from the theta'-column law.
  double u = rng.uniform() * m_[xi];
  std::size_t ti = 0;
  double cum = 0.0;
  for (; ti < nt; ++ti) {
    cum += f_[xi * nt + ti] * mu_[xi] * prior_[ti];
    if (u <= cum) break;
  }
  if (ti == nt) ti = nt - 1;

  double u2 = rng.uniform() * prior_[ti];
  std::size_t xj = 0;
  double cum2 = 0.0;
  for (; xj < x_points_.size(); ++xj) {
    cum2 += f_[xj * nt + ti] * mu_[xj] * prior_[ti];
    if (u2 <= cum2) break;
  }
  if (xj == x_points_.size()) xj = x_points_.size() - 1;
  return GibbsState{x_points_[xj], theta_points_[ti]};
}

bool FiniteModel::strictly_positive_f() const {
  return std::all_of(f_.begin(), f_.end(), [](double v) { return v > 0.0; });
}

double FiniteModel::sup_marginal() const {
  double best = 0.0;
  for (std::size_t xi = 0; xi < x_points_.size(); ++xi)
    best = std::max(best, m_[xi] / mu_[xi]);
  return best;
}

double FiniteModel::f_at(std::size_t xi, std::size_t ti) const {
  return f_[xi * theta_points_.size() + ti];
}

double FiniteModel::prior_at(std::size_t ti) const { return prior_[ti]; }

double FiniteModel::mu_weight_at(std::size_t xi) const { return mu_[xi]; }

}  // namespace gibbscert
