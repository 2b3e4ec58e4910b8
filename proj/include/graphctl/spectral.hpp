#pragma once

#include <vector>

#include "graphctl/metric_graph.hpp"

namespace graphctl {

// Transcendental secular functions whose roots are the nonzero eigenfrequencies
// ω = √λ. Star sums tangents over the edge lengths (Neumann tips), StarDirichlet
// sums cotangents (Dirichlet tips), TadpoleSymmetric is the symmetric family of
// the loop-with-tail graph: 2 tan(x L₁/2) + tan(x L₂).
enum class SecularKind { Star, TadpoleSymmetric, StarDirichlet };

double secular_value(SecularKind kind, double x, const std::vector<double>& lengths);

enum class ModeSymmetry { None, Symmetric, Skew };

const char* symmetry_name(ModeSymmetry s);

// One eigenpair in closed form: λ, ω = √λ, and a trigonometric expression per
// edge. `multiple` marks membership in a group of eigenvalues coinciding within
// 1e-9 in ω; `multiplicity` is the group size.
struct EigenMode {
  double lambda = 0;
  double omega = 0;
  std::vector<ClosedForm> edge_forms;
  ModeSymmetry symmetry = ModeSymmetry::None;
  bool multiple = false;
  int multiplicity = 1;
};

class Spectrum {
 public:
  Spectrum(MetricGraph graph, std::vector<EigenMode> modes);

  const MetricGraph& graph() const { return graph_; }
  int size() const { return static_cast<int>(modes_.size()); }

  // 1-based accessors, matching the λ_k indexing used throughout.
  double lambda(int k) const;
  double omega(int k) const;
  const EigenMode& mode(int k) const;
  GraphFunction eigenfunction(int k) const;

  std::vector<double> lambdas() const;
  std::vector<double> lambdas(int count) const;  // first `count` values

 private:
  MetricGraph graph_;
  std::vector<EigenMode> modes_;
};

// Closed-form spectra. Stars need uniform tip conditions (all Neumann or all
// Dirichlet); the tadpole needs a Neumann tail tip. Generic graphs are not
// handled here — use discretize_oracle.
Spectrum compute_spectrum(const MetricGraph& graph, int K);

// Largest continuity / flux-balance violation of mode k over internal
// vertices, evaluated from the closed forms. Both are zero up to roundoff for
// correctly assembled modes.
struct VertexResidual {
  double continuity = 0;
  double flux = 0;
};
VertexResidual nk_residual(const Spectrum& spectrum, int k);

// ---------------------------------------------------------------------------
// Finite-difference oracle

struct OracleMode {
  double lambda = 0;
  // per-edge node samples on the uniform oracle grid, including endpoints
  std::vector<std::vector<double>> edge_samples;
};

struct OracleResult {
  double h = 0;  // requested mesh width (per-edge widths are L_j / n_j ≤ h)
  std::vector<OracleMode> modes;
  std::vector<double> lambdas() const;
};

// Independent verification path: assemble the second-difference operator on
// per-edge uniform grids (lumped-mass P1 elements), couple edges through
// shared vertex unknowns, and extract the K smallest eigenvalues of the
// resulting symmetric pencil by inertia bisection.
OracleResult discretize_oracle(const MetricGraph& graph, double h, int K);

// ---------------------------------------------------------------------------
// Gap diagnostics

struct CountingSample {
  int k = 0;
  double rho = 0;
  int count = 0;
};

struct GapReport {
  int block_m = 1;
  double gamma = 0;  // min_k (√λ_{k+M} − √λ_k)

  // least-squares fit of log(√λ_{k+1} − √λ_k) ≈ log C − p log k
  double weak_c = 0;
  double weak_p = 0;
  double weak_residual = 0;     // rms residual of the log-space fit
  bool weak_gap_degenerate = false;  // some consecutive gap vanished (multiplicity)

  double weyl_min = 0, weyl_max = 0;  // min/max of λ_k / k² over k ≥ 2
  double min_consecutive_gap = 0;

  // nonincreasing envelope a_k = min_{m ≤ k} (√λ_{m+1} − √λ_m)
  std::vector<double> envelope_a;
  std::vector<CountingSample> counting_samples;
};

GapReport gap_report(const Spectrum& spectrum, int block_m);

// card{m : 0 < |λ_m − λ_k| ≤ ρ} within the computed spectrum.
int counting_function(const Spectrum& spectrum, int k, double rho);

}  // namespace graphctl
