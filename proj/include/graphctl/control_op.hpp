#pragma once

#include <Eigen/Core>
#include <vector>

#include "graphctl/spectral.hpp"

namespace graphctl {

// Multiplier shape on one edge. Cosine is the fixed half-period profile
// cos(πx/(2L)) — value 1 at x = 0, fading to 0 at the far end. All shapes are
// multiplied by `scale`.
struct EdgeProfile {
  enum class Kind { None, Cosine, Monomial, Sampled };
  Kind kind = Kind::None;
  double scale = 1.0;
  int power = 1;                // Monomial: x^power
  std::vector<double> values;   // Sampled: default grid on the edge

  static EdgeProfile none() { return {}; }
  static EdgeProfile cosine(double scale = 1.0) {
    return {Kind::Cosine, scale, 1, {}};
  }
  static EdgeProfile monomial(int power, double scale = 1.0) {
    return {Kind::Monomial, scale, power, {}};
  }
  static EdgeProfile sampled(std::vector<double> values, double scale = 1.0) {
    return {Kind::Sampled, scale, 1, std::move(values)};
  }
};

// Bounded multiplication operator B: (Bψ)^e = μ_e(x)·ψ^e(x). Profiles are
// stored per edge index; edges without a profile multiply by zero.
class ControlOperator {
 public:
  explicit ControlOperator(std::vector<EdgeProfile> profiles);

  int num_edges() const { return static_cast<int>(profiles_.size()); }
  const EdgeProfile& profile(int e) const { return profiles_.at(e); }

  double profile_value(int e, double x, double length) const;  // μ_e(x)
  GraphFunction apply(const GraphFunction& psi, const MetricGraph& graph) const;
  ControlOperator scaled(double c) const;

  static ControlOperator cosine_on_edge(int edge, int num_edges, double scale = 1.0);
  static ControlOperator monomial_on_edge(int edge, int num_edges, int power,
                                          double scale = 1.0);

 private:
  std::vector<EdgeProfile> profiles_;
};

// ⟨Bφ_j, φ_k⟩. A closed form covers the Neumann-star half-period cosine
// profile against the constant first mode; everything else goes through exact
// antiderivatives where the integrand allows and composite Simpson otherwise.
double coupling(const ControlOperator& B, const Spectrum& spectrum, int j, int k);

// Pure-quadrature route (always samples both factors); kept separate so the
// closed forms can be cross-checked against an independent evaluation.
double coupling_quadrature(const ControlOperator& B, const Spectrum& spectrum, int j, int k);

// Symmetric Galerkin block M_{mk} = ⟨Bφ_m, φ_k⟩ for m, k ≤ N.
Eigen::MatrixXd coupling_matrix(const ControlOperator& B, const Spectrum& spectrum, int N);

struct SpreadingReport {
  int j = 1;
  int modes = 0;
  double first_coupling = 0;  // ⟨Bφ_j, φ₁⟩
  double b = 0;               // min_k λ_k^q |⟨Bφ_j,φ_k⟩| over the fit range
  double q = 0;               // fitted decay exponent
  int worst_k = 0;            // index attaining b
  std::vector<int> floor_failures;  // k with |coupling| < 1e-14
  bool pass = false;
  std::vector<double> couplings;  // ⟨Bφ_j,φ_k⟩ for k = 1..modes
};

// Checks the coupling lower-bound hypothesis for mode j: the first coupling
// must be nonzero, and λ_k^q|⟨Bφ_j,φ_k⟩| must stay bounded away from zero for
// the fitted q. The fit runs over k ≥ 2 (λ₁ = 0 breaks the log regression).
SpreadingReport verify_spreading(const ControlOperator& B, const Spectrum& spectrum, int j,
                                 int N);

}  // namespace graphctl
