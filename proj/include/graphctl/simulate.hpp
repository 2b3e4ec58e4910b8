#pragma once

#include <Eigen/Core>
#include <vector>

#include "graphctl/moment.hpp"

namespace graphctl {

// Modal trajectory of the controlled equation ż = -Λ z - u(t) M z.
struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;  // one entry per time, including t = 0
  double dt = 0;                        // effective step (T / steps)
  int steps = 0;
  Eigen::VectorXd final_state;
  double final_norm = 0;

  // Σ_{m > k} z_m(T)² — energy left above the first k modal coordinates.
  double energy_above(int k) const;
};

// e^{-Λ t} z0.
Eigen::VectorXd free_evolution(const std::vector<double>& lambdas, const Eigen::VectorXd& z0,
                               double t);

// Step used when the caller does not pin one: small against both the control
// resolution and the fastest retained mode.
double default_dt(double lambda_max);

// Strang splitting with exact factors: half-step of the diagonal heat flow,
// full step of the control coupling e^{-u(t_mid) dt M} via the spectral
// decomposition of M, half-step of the heat flow. Second order in dt and
// unconditionally stable; dt above 0.5 / λ_max is rejected anyway because the
// midpoint sampling of u would be meaningless there.
Trajectory evolve_bilinear(const std::vector<double>& lambdas, const Eigen::MatrixXd& coupling,
                           const ControlSignal& u, const Eigen::VectorXd& z0, double dt = 0);

// Closed form for the linearization around a steady profile with couplings
// b_k: z_k(T) = e^{-λ_k T} z_k(0) - b_k ∫_0^T e^{-λ_k (T-s)} u(s) ds. The
// integral is c-exact for moment-method controls (∫ = (G c)_k), evaluated in
// extended precision.
Eigen::VectorXd evolve_linearized(const std::vector<double>& lambdas,
                                  const std::vector<double>& couplings,
                                  const Eigen::VectorXd& z0, const ControlSignal& u);

}  // namespace graphctl
