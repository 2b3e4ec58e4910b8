#pragma once

#include <vector>

#include "graphctl/control_op.hpp"
#include "graphctl/spectral.hpp"

namespace graphctl {

// Antisymmetric subspace of the 4-edge Dirichlet star with three unit arms
// and a spectator tail: 𝓗 = span{f_k}, f_k = (sin kπx, -sin kπx, 0, 0).
// Each f_k is a Laplacian eigenfunction (λ = k²π², exactly unit norm), and 𝓗
// is closed under every multiplication operator acting identically on the
// first two arms.
class InvariantSubspace {
 public:
  InvariantSubspace(MetricGraph graph, int K);

  const MetricGraph& graph() const { return graph_; }
  int modes() const { return K_; }
  double tail_length() const { return tail_length_; }

  const std::vector<double>& reduced_lambdas() const { return lambdas_; }
  GraphFunction generator(int k) const;  // f_k, 1-based

 private:
  MetricGraph graph_;
  int K_ = 0;
  double tail_length_ = 0;
  std::vector<double> lambdas_;
};

// Validates the geometry (4 edges, Dirichlet tips, first three lengths equal
// to 1) and assembles the K generators.
InvariantSubspace build_invariant_subspace(const MetricGraph& graph, int K);

// Orthogonal projection onto the antisymmetric pattern:
// P(ψ) = ((ψ¹-ψ²)/2, (ψ²-ψ¹)/2, 0, 0), sampled on the default grid.
GraphFunction pattern_project(const GraphFunction& psi, const MetricGraph& graph);

struct InvarianceReport {
  int trials = 0;
  double worst_residual = 0;  // max ‖Bψ - P(Bψ)‖ over unit ψ ∈ 𝓗
  bool pass = false;
};

// Empirical check that B maps 𝓗 into itself: random unit combinations of the
// generators (fixed internal seed), leakage measured in L². Passing needs the
// worst residual below 1e-10.
InvarianceReport check_B_invariance(const ControlOperator& B, const InvariantSubspace& subspace,
                                    int trials = 20);

// The dynamics restricted to 𝓗, rewritten on the unit interval: generators
// map to √2 sin(kπx), eigenvalues stay k²π², and the multiplier is the common
// profile of the first two arms.
struct ReducedProblem {
  MetricGraph interval;
  Spectrum spectrum;
  ControlOperator multiplier;
};

// Requires a passing invariance check (NotInvariant otherwise) and equal
// profiles on the two active arms.
ReducedProblem reduce_to_interval(const ControlOperator& B, const InvariantSubspace& subspace,
                                  int K);

}  // namespace graphctl
