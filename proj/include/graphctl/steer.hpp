#pragma once

#include <Eigen/Core>
#include <vector>

#include "graphctl/moment.hpp"
#include "graphctl/simulate.hpp"

namespace graphctl {

// Inputs shared by all steering entry points: the modal data of the graph
// problem (eigenvalues and Galerkin matrix of B), the window threshold θ for
// picking which modes a horizon T can still influence, the relative basin
// radius of the linearization, and the integrator configuration.
struct SteerSetup {
  std::vector<double> lambdas;
  Eigen::MatrixXd coupling;  // M_{km} = ⟨Bφ_m, φ_k⟩
  double theta = 0.3;
  double basin = 0.05;
  double dt = 0;  // 0: pick from the fastest simulated mode
  Precision precision = Precision::Auto;
};

struct SteerIteration {
  int index = 0;
  double residual_before = 0;
  double residual_after = 0;
  double control_norm = 0;
};

struct SteeringRun {
  int j = 1;
  double T = 0;             // horizon of one window
  int window_modes = 0;     // controlled prefix 1..m
  int sim_modes = 0;        // modes carried by the bilinear simulation
  std::vector<SteerIteration> log;
  std::vector<ControlSignal> window_controls;
  bool converged = false;
  int iterations = 0;
  double final_residual = 0;      // ‖y - r e_j‖ after the last window
  double basin_radius = 0;        // relative radius the run was allowed
  double wait_time = 0;           // free decay before the first window
  double total_control_norm = 0;  // L² norm of the concatenated control
  Eigen::VectorXd final_state;
};

// Modes a window of length T can address: the prefix 1..m where m is the last
// index with e^{-(λ_k - λ_j) T} ≥ θ (all k ≤ j always belong).
int controlled_window(const std::vector<double>& lambdas, int j, double T, double theta);

// Successive linearization around the decaying reference r e^{-λ_j t} φ_j.
// Each window solves a moment problem in the shifted exponents λ_k - λ_j for
// the controlled prefix, applies the resulting scalar control to the full
// bilinear dynamics, and repeats until the deviation falls below tol. The
// initial deviation must lie within the relative basin; two consecutive
// residual increases abort the run (Diverged).
SteeringRun steer_to_eigensolution(const SteerSetup& setup, const Eigen::VectorXd& psi0, int j,
                                   double T, int max_iter, double tol);

// Region handled before the local scheme starts. Strip: initial data with
// first coordinate near 1 and bounded transverse part — free decay shrinks
// the deviation into the basin, and the wait time solves dev(t) = basin in
// closed form. Cone: any scalar multiple of a basin state — the dynamics are
// homogeneous, so the run is performed on y0 / ⟨y0, e₁⟩ and scaled back.
enum class SemiglobalMode { Strip, Cone };

SteeringRun semiglobal_steer(const SteerSetup& setup, const Eigen::VectorXd& y0,
                             SemiglobalMode mode, double r1, double R, double T, int max_iter,
                             double tol);

}  // namespace graphctl
