#include <algorithm>
#include <cmath>
#include <sstream>

#include "gibbscert/errors.hpp"
#include "gibbscert/transition.hpp"

namespace gibbscert {

namespace {

TransitionMatrix beta_binomial_matrix(const BetaBinomialModel& model) {
  int n = model.n();
  std::size_t size = std::size_t(n) + 1;
  TransitionMatrix tm;
  tm.P.resize(size, size);
  tm.stationary.resize(size);
  tm.states.resize(size);
  tm.row_leak.assign(size, 0.0);
  for (int x = 0; x <= n; ++x) {
    tm.states[x] = double(x);
    tm.stationary[x] = 1.0 / (n + 1.0);
    for (int x2 = 0; x2 <= n; ++x2) tm.P(x, x2) = model.x_chain_prob(x, x2);
  }
  return tm;
}

TransitionMatrix poisson_gamma_matrix(const PoissonGammaModel& model) {
  int n_max = model.n_max();
  std::size_t size = std::size_t(n_max) + 1;
  TransitionMatrix tm;
  tm.truncated = true;
  tm.stationary_tail = model.stationary_tail();
  tm.P.resize(size, size);
  tm.stationary.resize(size);
  tm.states.resize(size);
  tm.row_leak.resize(size);
  for (int x = 0; x <= n_max; ++x) {
    tm.states[x] = double(x);
    // True (unnormalized) stationary masses: the represented block sums to
    // 1 - stationary_tail, which keeps the oracle's defect accounting exact.
    tm.stationary[x] = std::pow(2.0, -(x + 1.0));
    for (int k = 0; k <= n_max; ++k) tm.P(x, k) = model.x_chain_prob(x, k);
    tm.row_leak[x] = model.transition_row_tail(double(x));
  }
  return tm;
}

TransitionMatrix finite_model_matrix(const FiniteModel& model) {
  std::size_t nx = model.x_size();
  std::size_t nt = model.theta_size();
  const auto& xs = model.x_space().as_finite();
  TransitionMatrix tm;
  tm.P.setZero(nx, nx);
  tm.stationary.resize(nx);
  tm.states = xs.points;
  tm.row_leak.assign(nx, 0.0);
  for (std::size_t xi = 0; xi < nx; ++xi)
    tm.stationary[xi] = model.marginal(xs.points[xi]) * model.mu_weight_at(xi);
  // P = A B^T with A the posterior table and B the conditional-of-x table:
  // P(x -> x') = sum_t pi(t | x) f(x' | t) mu(x').
  for (std::size_t xi = 0; xi < nx; ++xi) {
    double mx = tm.stationary[xi];
    for (std::size_t ti = 0; ti < nt; ++ti) {
      double joint = model.f_at(xi, ti) * model.mu_weight_at(xi) *
                     model.prior_at(ti);
      if (!(joint > 0.0)) continue;
      double post = joint / mx;
      for (std::size_t xj = 0; xj < nx; ++xj)
        tm.P(xi, xj) += post * model.f_at(xj, ti) * model.mu_weight_at(xj);
    }
  }
  return tm;
}

}  // namespace

TransitionMatrix x_chain_matrix(const TwoComponentModel& model) {
  if (const auto* bb = dynamic_cast<const BetaBinomialModel*>(&model))
    return beta_binomial_matrix(*bb);
  if (const auto* pg = dynamic_cast<const PoissonGammaModel*>(&model))
    return poisson_gamma_matrix(*pg);
  if (const auto* fm = dynamic_cast<const FiniteModel*>(&model))
    return finite_model_matrix(*fm);
  throw unsupported_error("x_chain_matrix: model '" + model.name() +
                          "' has no exact transition matrix");
}

TransitionMatrix pair_chain_matrix(const FiniteThreeComponentModel& model) {
  std::size_t n1 = model.x1_size();
  std::size_t n2 = model.x2_size();
  std::size_t size = n1 * n2;
  TransitionMatrix tm;
  tm.P.setZero(size, size);
  tm.stationary.resize(size);
  tm.states.resize(size);
  tm.row_leak.assign(size, 0.0);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      std::size_t row = i * n2 + j;
      tm.states[row] = double(row);
      tm.stationary[row] = model.pair_mass(i, j);
      if (!(model.pair_mass(i, j) > 0.0)) {
        // Null start states never occur under the stationary law; give them
        // an absorbing row so the matrix stays stochastic.
        tm.P(row, row) = 1.0;
        continue;
      }
      for (std::size_t i2 = 0; i2 < n1; ++i2)
        for (std::size_t j2 = 0; j2 < n2; ++j2)
          tm.P(row, i2 * n2 + j2) = model.pair_transition(i, j, i2, j2);
    }
  return tm;
}

void validate_transition_matrix(const TransitionMatrix& tm, double row_tol,
                                double fixed_point_tol) {
  std::size_t size = tm.size();
  for (std::size_t i = 0; i < size; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < size; ++j) {
      if (tm.P(i, j) < -1e-15) {
        std::ostringstream msg;
        msg << "transition matrix: negative entry P(" << i << "," << j
            << ") = " << tm.P(i, j);
        throw numeric_error(msg.str(), tm.P(i, j));
      }
      row += tm.P(i, j);
    }
    // Leak entries are upper bounds on the escaped mass, so a truncated row
    // may fall short of 1 by at most row_leak; exact rows must hit 1.
    double excess = row - 1.0;
    double shortfall = (1.0 - tm.row_leak[i]) - row;
    if (excess > row_tol || (!tm.truncated && std::abs(row - 1.0) > row_tol) ||
        (tm.truncated && shortfall > row_tol)) {
      std::ostringstream msg;
      msg << "transition matrix: row " << i << " sums to " << row
          << " (leak bound " << tm.row_leak[i] << ")";
      throw numeric_error(msg.str(), row - 1.0);
    }
  }
  // Stationarity: (m P)_j = m_j exactly on finite spaces; truncated spaces
  // get slack for the mass the matrix cannot see.
  Eigen::VectorXd left = tm.P.transpose() * tm.stationary;
  for (std::size_t j = 0; j < size; ++j) {
    double slack = fixed_point_tol + (tm.truncated ? tm.stationary_tail : 0.0);
    if (std::abs(left[j] - tm.stationary[j]) > slack) {
      std::ostringstream msg;
      msg << "transition matrix: stationary vector is not a fixed point at "
             "state "
          << j << " (residual " << left[j] - tm.stationary[j] << ")";
      throw numeric_error(msg.str(), left[j] - tm.stationary[j]);
    }
  }
}

SpectralData spectral_decomposition(const TransitionMatrix& tm,
                                    double reversibility_tol) {
  std::size_t size = tm.size();
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = i + 1; j < size; ++j) {
      double flow = tm.stationary[i] * tm.P(i, j);
      double back = tm.stationary[j] * tm.P(j, i);
      if (std::abs(flow - back) > reversibility_tol) {
        std::ostringstream msg;
        msg << "spectral decomposition: detailed balance fails between states "
            << i << " and " << j << " (flux gap " << flow - back << ")";
        throw certificate_error(msg.str());
      }
    }

  // Conjugate by D^{1/2} with D = diag(m): S = D^{1/2} P D^{-1/2} is
  // symmetric for a reversible chain and shares its spectrum.
  Eigen::VectorXd sqrt_m(size);
  for (std::size_t i = 0; i < size; ++i) sqrt_m[i] = std::sqrt(tm.stationary[i]);
  Eigen::MatrixXd s(size, size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j)
      s(i, j) = sqrt_m[i] * tm.P(i, j) / sqrt_m[j];
  // Exact symmetrization removes the roundoff the solver would otherwise see.
  s = 0.5 * (s + s.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
  if (solver.info() != Eigen::Success)
    throw numeric_error("spectral decomposition: eigensolver failed", 0.0);

  // Reorder to decreasing eigenvalues and map eigenvectors back to
  // eigenfunctions phi_j = v_j / sqrt(m), normalized in L2(m).
  std::vector<int> order(size);
  for (std::size_t i = 0; i < size; ++i) order[i] = int(i);
  std::sort(order.begin(), order.end(), [&solver](int a, int b) {
    return solver.eigenvalues()[a] > solver.eigenvalues()[b];
  });

  SpectralData sd;
  sd.eigenvalues.resize(size);
  sd.eigenfunctions.resize(size, size);
  for (std::size_t j = 0; j < size; ++j) {
    int src = order[j];
    sd.eigenvalues[j] = solver.eigenvalues()[src];
    Eigen::VectorXd phi = solver.eigenvectors().col(src);
    for (std::size_t i = 0; i < size; ++i) phi[i] /= sqrt_m[i];
    // Deterministic sign: make the entry of largest magnitude positive.
    int arg = 0;
    for (std::size_t i = 1; i < size; ++i)
      if (std::abs(phi[i]) > std::abs(phi[arg])) arg = int(i);
    if (phi[arg] < 0.0) phi = -phi;
    sd.eigenfunctions.col(j) = phi;
  }
  return sd;
}

}  // namespace gibbscert
