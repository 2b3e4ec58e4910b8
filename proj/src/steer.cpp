#include "graphctl/steer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace graphctl {
namespace {

void validate_setup(const SteerSetup& setup, int j, double T, int max_iter, double tol) {
  const auto n = static_cast<Eigen::Index>(setup.lambdas.size());
  if (n == 0) fail(ErrorCode::BadInput, "steering needs at least one mode");
  if (setup.coupling.rows() != n || setup.coupling.cols() != n) {
    fail(ErrorCode::BadInput, "coupling matrix size does not match the mode count");
  }
  if (j < 1 || j > n) fail(ErrorCode::IndexOutOfRange, "target mode outside the spectrum");
  if (!(T > 0)) fail(ErrorCode::BadInput, "window length must be positive");
  if (!(tol > 0)) fail(ErrorCode::BadInput, "tolerance must be positive");
  if (max_iter < 0) fail(ErrorCode::BadInput, "iteration budget must be nonnegative");
  if (!(setup.theta > 0) || setup.theta > 1) {
    fail(ErrorCode::BadInput, "window threshold must lie in (0, 1]");
  }
  if (!(setup.basin > 0)) fail(ErrorCode::BadInput, "basin radius must be positive");
  for (size_t k = 0; k + 1 < setup.lambdas.size(); ++k) {
    const double gap = setup.lambdas[k + 1] - setup.lambdas[k];
    if (gap <= 1e-9 * std::max(1.0, std::abs(setup.lambdas[k + 1]))) {
      fail(ErrorCode::MultiplicityDetected,
           "eigenvalues " + std::to_string(k + 1) + " and " + std::to_string(k + 2) +
               " coincide; the moment family degenerates");
    }
  }
}

double deviation(const Eigen::VectorXd& y, double r, int j) {
  Eigen::VectorXd z = y;
  z[j - 1] -= r;
  return z.norm();
}

// Core loop shared by the local and semiglobal entries. `r0` is the reference
// amplitude (the run targets r0 e^{-λ_j t} φ_j); the caller has already
// validated the setup.
SteeringRun run_windows(const SteerSetup& setup, const Eigen::VectorXd& y0, int j, double T,
                        int max_iter, double tol, double r0) {
  const int n = static_cast<int>(setup.lambdas.size());
  const int m = controlled_window(setup.lambdas, j, T, setup.theta);
  const int n_sim = std::min(n, std::max(2 * m, 10));

  SteeringRun run;
  run.j = j;
  run.T = T;
  run.window_modes = m;
  run.sim_modes = n_sim;
  run.basin_radius = setup.basin;

  std::vector<double> mu(m), b(m), lam_sim(n_sim);
  for (int k = 0; k < m; ++k) {
    mu[k] = setup.lambdas[k] - setup.lambdas[j - 1];
    b[k] = setup.coupling(k, j - 1);
  }
  for (int k = 0; k < n_sim; ++k) lam_sim[k] = setup.lambdas[k];
  const Eigen::MatrixXd m_sim = setup.coupling.topLeftCorner(n_sim, n_sim);

  Eigen::VectorXd y = y0.head(n_sim);
  double r = r0;
  double dev = deviation(y, r, j);

  if (dev < tol) {
    run.converged = true;
    run.final_residual = dev;
    run.final_state = y;
    return run;
  }
  if (dev > setup.basin * std::abs(r) * (1 + 1e-9)) {
    fail(ErrorCode::OutsideBasin, "initial deviation " + std::to_string(dev) +
                                      " exceeds the basin radius " +
                                      std::to_string(setup.basin * std::abs(r)));
  }

  double control_sq = 0;
  int rises = 0;
  for (int it = 1; it <= max_iter && dev >= tol; ++it) {
    // moment targets for the rescaled deviation v_k = e^{λ_j t} z_k / r
    std::vector<double> scaled(m);
    for (int k = 0; k < m; ++k) {
      scaled[k] = (y[k] - (k == j - 1 ? r : 0.0)) / r;
    }
    MomentProblem problem{mu, T, null_control_targets(scaled, b), TargetProvenance::FromState};
    const ControlSignal u = solve_moment(problem, setup.precision);

    const Trajectory traj = evolve_bilinear(lam_sim, m_sim, u, y, setup.dt);
    y = traj.final_state;
    r *= std::exp(-setup.lambdas[j - 1] * T);

    const double next = deviation(y, r, j);
    run.log.push_back({it, dev, next, u.l2_norm});
    run.window_controls.push_back(u);
    control_sq += u.l2_norm * u.l2_norm;
    ++run.iterations;

    rises = next > dev ? rises + 1 : 0;
    if (rises >= 2) {
      fail(ErrorCode::Diverged, "deviation grew over two consecutive windows (" +
                                    std::to_string(dev) + " -> " + std::to_string(next) + ")");
    }
    dev = next;
  }

  run.converged = dev < tol;
  run.final_residual = dev;
  run.total_control_norm = std::sqrt(control_sq);
  run.final_state = y;
  return run;
}

}  // namespace

int controlled_window(const std::vector<double>& lambdas, int j, double T, double theta) {
  if (j < 1 || j > static_cast<int>(lambdas.size())) {
    fail(ErrorCode::IndexOutOfRange, "target mode outside the spectrum");
  }
  int m = j;
  while (m < static_cast<int>(lambdas.size()) &&
         std::exp(-(lambdas[m] - lambdas[j - 1]) * T) >= theta) {
    ++m;
  }
  return m;
}

SteeringRun steer_to_eigensolution(const SteerSetup& setup, const Eigen::VectorXd& psi0, int j,
                                   double T, int max_iter, double tol) {
  validate_setup(setup, j, T, max_iter, tol);
  if (psi0.size() != static_cast<Eigen::Index>(setup.lambdas.size())) {
    fail(ErrorCode::BadInput, "initial state length does not match the mode count");
  }
  const double r0 = psi0[j - 1];
  if (r0 == 0) {
    fail(ErrorCode::OutsideBasin, "initial state has no component along the target mode");
  }
  return run_windows(setup, psi0, j, T, max_iter, tol, r0);
}

SteeringRun semiglobal_steer(const SteerSetup& setup, const Eigen::VectorXd& y0,
                             SemiglobalMode mode, double r1, double R, double T, int max_iter,
                             double tol) {
  const int j = 1;
  validate_setup(setup, j, T, max_iter, tol);
  if (y0.size() != static_cast<Eigen::Index>(setup.lambdas.size())) {
    fail(ErrorCode::BadInput, "initial state length does not match the mode count");
  }
  const double p = y0[0];

  if (mode == SemiglobalMode::Cone) {
    if (p == 0) {
      fail(ErrorCode::OutsideBasin, "cone states need a nonzero first coordinate");
    }
    // homogeneity: steer y0 / p with reference 1, then scale everything back
    SteeringRun run = run_windows(setup, y0 / p, j, T, max_iter, tol / std::abs(p), 1.0);
    run.final_state *= p;
    run.final_residual *= std::abs(p);
    for (auto& entry : run.log) {
      entry.residual_before *= std::abs(p);
      entry.residual_after *= std::abs(p);
    }
    return run;
  }

  // Strip: |⟨y0, e₁⟩ - 1| < r1 with transverse part at most R. Free decay
  // contracts the deviation from the unit reference onto the constant offset
  // |p - 1|, so a wait of finite length reaches the basin iff that offset is
  // inside it.
  if (!(r1 > 0) || !(R > 0)) fail(ErrorCode::BadInput, "strip needs positive r1 and R");
  if (!(std::abs(p - 1) < r1)) {
    fail(ErrorCode::OutsideBasin, "first coordinate " + std::to_string(p) +
                                      " leaves the strip around the eigensolution");
  }
  Eigen::VectorXd transverse = y0;
  transverse[0] = 0;
  if (transverse.norm() > R) {
    fail(ErrorCode::OutsideBasin, "transverse norm " + std::to_string(transverse.norm()) +
                                      " exceeds the strip width");
  }
  if (setup.lambdas.size() < 2) {
    fail(ErrorCode::BadInput, "strip steering needs at least two modes");
  }

  const double mu2 = setup.lambdas[1] - setup.lambdas[0];
  const auto dev_rel = [&](double t) {
    double s = (p - 1) * (p - 1);
    for (Eigen::Index k = 1; k < y0.size(); ++k) {
      const double d = y0[k] * std::exp(-(setup.lambdas[k] - setup.lambdas[0]) * t);
      s += d * d;
    }
    return std::sqrt(s);
  };

  double wait = 0;
  if (dev_rel(0) > setup.basin) {
    const double t_max = 50.0 / mu2;
    if (dev_rel(t_max) > setup.basin) {
      fail(ErrorCode::WaitTimeExceeded,
           "free decay cannot reach the basin within t = " + std::to_string(t_max));
    }
    double lo = 0, hi = t_max;
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
      const double mid = (lo + hi) / 2;
      (dev_rel(mid) > setup.basin ? lo : hi) = mid;
    }
    wait = hi;
  }

  Eigen::VectorXd y_wait(y0.size());
  for (Eigen::Index k = 0; k < y0.size(); ++k) {
    y_wait[k] = y0[k] * std::exp(-setup.lambdas[k] * wait);
  }
  const double r0 = std::exp(-setup.lambdas[0] * wait);

  SteeringRun run = run_windows(setup, y_wait, j, T, max_iter, tol, r0);
  run.wait_time = wait;
  return run;
}

}  // namespace graphctl
