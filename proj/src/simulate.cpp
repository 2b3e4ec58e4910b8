#include "graphctl/simulate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

namespace graphctl {

double Trajectory::energy_above(int k) const {
  double e = 0;
  for (int m = k; m < final_state.size(); ++m) e += final_state[m] * final_state[m];
  return e;
}

Eigen::VectorXd free_evolution(const std::vector<double>& lambdas, const Eigen::VectorXd& z0,
                               double t) {
  if (z0.size() != static_cast<Eigen::Index>(lambdas.size())) {
    fail(ErrorCode::BadInput, "state length does not match the mode count");
  }
  if (t < 0) fail(ErrorCode::BadInput, "free evolution needs t >= 0");
  Eigen::VectorXd z(z0.size());
  for (Eigen::Index k = 0; k < z0.size(); ++k) z[k] = std::exp(-lambdas[k] * t) * z0[k];
  return z;
}

double default_dt(double lambda_max) {
  if (lambda_max <= 0) return 1e-4;
  return std::min(1e-4, 0.1 / lambda_max);
}

Trajectory evolve_bilinear(const std::vector<double>& lambdas, const Eigen::MatrixXd& coupling,
                           const ControlSignal& u, const Eigen::VectorXd& z0, double dt) {
  const auto n_modes = static_cast<Eigen::Index>(lambdas.size());
  if (coupling.rows() != n_modes || coupling.cols() != n_modes) {
    fail(ErrorCode::BadInput, "coupling matrix size does not match the mode count");
  }
  if (z0.size() != n_modes) fail(ErrorCode::BadInput, "state length does not match the mode count");
  const double T = u.horizon();
  if (!(T > 0)) fail(ErrorCode::BadInput, "control horizon must be positive");

  double lambda_max = 0;
  for (double l : lambdas) lambda_max = std::max(lambda_max, std::abs(l));
  if (dt == 0) dt = default_dt(lambda_max);
  if (!(dt > 0)) fail(ErrorCode::BadInput, "time step must be positive");
  if (lambda_max > 0 && dt > 0.5 / lambda_max) {
    fail(ErrorCode::StepTooLarge, "dt " + std::to_string(dt) + " cannot resolve decay rate " +
                                      std::to_string(lambda_max));
  }

  const int steps = std::max(1, static_cast<int>(std::ceil(T / dt)));
  const double h = T / steps;
  const std::vector<double> u_mid = u.sample_grid(2 * steps);  // odd indices = midpoints

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(coupling);
  if (es.info() != Eigen::Success) {
    fail(ErrorCode::EigensolverFailure, "coupling matrix eigendecomposition failed");
  }
  const Eigen::MatrixXd& q = es.eigenvectors();
  const Eigen::VectorXd& mu = es.eigenvalues();

  Eigen::VectorXd half_decay(n_modes);
  for (Eigen::Index k = 0; k < n_modes; ++k) half_decay[k] = std::exp(-lambdas[k] * h / 2);

  Trajectory traj;
  traj.dt = h;
  traj.steps = steps;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.times.push_back(0);
  traj.states.push_back(z0);

  Eigen::VectorXd z = z0;
  for (int i = 0; i < steps; ++i) {
    z = half_decay.cwiseProduct(z);
    Eigen::VectorXd w = q.transpose() * z;
    const double um = u_mid[2 * i + 1];
    for (Eigen::Index k = 0; k < n_modes; ++k) w[k] *= std::exp(-um * h * mu[k]);
    z = half_decay.cwiseProduct(q * w);
    if (!z.allFinite()) {
      fail(ErrorCode::NonFiniteState,
           "state became non-finite at t = " + std::to_string((i + 1) * h));
    }
    traj.times.push_back((i + 1) * h);
    traj.states.push_back(z);
  }
  traj.final_state = z;
  traj.final_norm = z.norm();
  return traj;
}

Eigen::VectorXd evolve_linearized(const std::vector<double>& lambdas,
                                  const std::vector<double>& couplings,
                                  const Eigen::VectorXd& z0, const ControlSignal& u) {
  const size_t n = lambdas.size();
  if (couplings.size() != n || static_cast<size_t>(z0.size()) != n) {
    fail(ErrorCode::BadInput, "linearized evolution needs matching mode counts");
  }
  if (u.lambdas().size() != n) {
    fail(ErrorCode::BadInput, "control exponent family does not match the mode count");
  }
  for (size_t k = 0; k < n; ++k) {
    const double scale = std::max(1.0, std::abs(lambdas[k]));
    if (std::abs(u.lambdas()[k] - lambdas[k]) > 1e-12 * scale) {
      fail(ErrorCode::BadInput, "control was synthesized for different exponents");
    }
  }

  const XMatrix g = gram_matrix_x(lambdas, u.horizon());
  const xvec gc = matvec(g, u.coefficients());
  Eigen::VectorXd z(static_cast<Eigen::Index>(n));
  for (size_t k = 0; k < n; ++k) {
    const xreal decayed = exp(xreal(-lambdas[k]) * u.horizon()) * z0[static_cast<Eigen::Index>(k)];
    z[static_cast<Eigen::Index>(k)] = to_double(decayed - xreal(couplings[k]) * gc[k]);
  }
  return z;
}

}  // namespace graphctl
