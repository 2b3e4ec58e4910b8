#pragma once

#include <Eigen/Core>
#include <vector>

#include "graphctl/xprec.hpp"

namespace graphctl {

// Arithmetic used for the exponential moment systems. Standard stays in
// double and fails loudly when the Gram matrix is too ill conditioned for
// that; Auto retries in extended precision instead of failing.
enum class Precision { Standard, Extended, Auto };

const char* precision_name(Precision p);

// Whether the targets d_k were given directly or derived from a state via
// d_k = z_k / b_k. Metadata only — the solver treats both the same way.
enum class TargetProvenance { Raw, FromState };

// Find u(s) = Σ_k c_k e^{-λ_k (T-s)} with ∫_0^T u(s) e^{-λ_k (T-s)} ds =
// e^{-λ_k T} d_k for k = 1..N. The λ_k must be strictly increasing; shifted
// families (negative values) are allowed.
struct MomentProblem {
  std::vector<double> lambdas;
  double T = 1.0;
  std::vector<double> targets;  // d_k
  TargetProvenance provenance = TargetProvenance::Raw;
};

// Control built from the shifted exponential family. Coefficients are kept in
// extended precision even when the solve ran in double: the c_k can reach
// e^{λ_N T} while u(s) itself stays of moderate size, so samples are always
// accumulated in extended arithmetic and rounded at the end.
class ControlSignal {
 public:
  ControlSignal() = default;
  ControlSignal(std::vector<double> lambdas, double T, xvec coefficients);

  double horizon() const { return T_; }
  int modes() const { return static_cast<int>(lambdas_.size()); }
  const std::vector<double>& lambdas() const { return lambdas_; }
  const xvec& coefficients() const { return coefficients_; }

  double value(double s) const;
  // n+1 uniform samples on [0, T] (s_i = i T / n)
  std::vector<double> sample_grid(int n) const;

  double l2_norm = 0;           // sqrt(cᵀ G c)
  Precision used = Precision::Standard;
  double residual_raw = 0;      // max_k e^{λ_k T} |(G c - e^{-λ T} d)_k|
  double residual_shifted = 0;  // max_k |(G c - e^{-λ T} d)_k|

 private:
  std::vector<double> lambdas_;
  double T_ = 0;
  xvec coefficients_;
};

// Rows of C = D⁻¹ G⁻¹ give the family σ_k = Σ_l C_{kl} e^{-λ_l (T-s)} with
// ∫_0^T σ_k(s) e^{-λ_j (T-s)} ds = e^{-λ_k T} δ_{kj}, i.e. the biorthogonal
// family of {e^{-λ_j s}} on [0, T] after the change of frame s ↦ T - s.
struct BiorthogonalFamily {
  std::vector<double> lambdas;
  double T = 0;
  XMatrix C;
  std::vector<double> log_norms;  // log ‖σ_k‖ = -λ_k T + ½ log (G⁻¹)_{kk}
  std::vector<double> norms;      // exp(log_norms); may overflow to inf
  double cond = 0;                // spectral condition number of G
  Precision used = Precision::Standard;
  double residual_shifted = 0;  // max |X G - I| with X the computed inverse
  double residual_raw = 0;      // max e^{(λ_j - λ_k) T} |(X G - I)_{kj}|
};

// Gram matrix G_{kl} = ∫_0^T e^{-(λ_k+λ_l)(T-s)} ds. Rejects coinciding
// exponents (DegenerateSpectrum): the family loses linear independence.
Eigen::MatrixXd gram_matrix(const std::vector<double>& lambdas, double T);
XMatrix gram_matrix_x(const std::vector<double>& lambdas, double T);

BiorthogonalFamily finite_biorthogonal(const std::vector<double>& lambdas, double T,
                                       Precision precision);

ControlSignal solve_moment(const MomentProblem& problem, Precision precision);

// d_k = z_k / b_k; rejects |b_k| ≤ 1e-14 (ZeroCoupling) — such a mode cannot
// be steered by this operator.
std::vector<double> null_control_targets(const std::vector<double>& z,
                                         const std::vector<double>& couplings);

// Smallest-control bound K(T) = σ_max(L⁻¹ D⁻¹ diag(1/b_k)) where G = L Lᵀ:
// the operator norm of the map from modal targets to the minimal-norm control.
// Always evaluated in extended precision; `samples` extra random directions
// cross-check the power iteration and the larger of the two estimates wins.
double control_cost(const std::vector<double>& lambdas, const std::vector<double>& couplings,
                    double T, int samples = 8);

}  // namespace graphctl
