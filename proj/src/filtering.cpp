#include "graphctl/filtering.hpp"

#include <cmath>
#include <random>
#include <string>

namespace graphctl {
namespace {

constexpr double kPi = 3.14159265358979323846;

bool profiles_equal(const EdgeProfile& a, const EdgeProfile& b) {
  return a.kind == b.kind && a.scale == b.scale && a.power == b.power && a.values == b.values;
}

}  // namespace

InvariantSubspace::InvariantSubspace(MetricGraph graph, int K)
    : graph_(std::move(graph)), K_(K) {
  if (K_ < 1) fail(ErrorCode::BadInput, "subspace needs at least one generator");
  if (graph_.num_edges() != 4) {
    fail(ErrorCode::UnsupportedKind, "the antisymmetric subspace lives on a 4-edge star");
  }
  for (int e = 0; e < 3; ++e) {
    if (std::abs(graph_.edges()[e].length - 1.0) > 1e-12) {
      fail(ErrorCode::UnequalLengths,
           "arm " + std::to_string(e + 1) + " must have unit length for the sine family");
    }
  }
  for (const auto& v : graph_.vertices()) {
    if (graph_.is_external(v.id) && v.condition != VertexCondition::Dirichlet) {
      fail(ErrorCode::UnsupportedKind, "the sine family needs Dirichlet tips");
    }
  }
  // generators vanish at the junction, so any tip placement of the arms works;
  // the tail only needs to be present
  tail_length_ = graph_.edges()[3].length;
  lambdas_.resize(K_);
  for (int k = 1; k <= K_; ++k) lambdas_[k - 1] = static_cast<double>(k) * k * kPi * kPi;
}

GraphFunction InvariantSubspace::generator(int k) const {
  if (k < 1 || k > K_) fail(ErrorCode::IndexOutOfRange, "generator index outside 1..K");
  GraphFunction f = GraphFunction::zeros(4);
  f.edge(0) = EdgeFunction::closed(ClosedForm::sine(1.0, k * kPi, 0.0));
  f.edge(1) = EdgeFunction::closed(ClosedForm::sine(-1.0, k * kPi, 0.0));
  return f;
}

InvariantSubspace build_invariant_subspace(const MetricGraph& graph, int K) {
  return InvariantSubspace(graph, K);
}

GraphFunction pattern_project(const GraphFunction& psi, const MetricGraph& graph) {
  if (psi.num_edges() != graph.num_edges() || graph.num_edges() != 4) {
    fail(ErrorCode::GridMismatch, "pattern projection expects a 4-edge state");
  }
  const double length = graph.edges()[0].length;
  const int n = default_intervals(length);
  const std::vector<double> s1 = sample_edge_default(psi.edge(0), length);
  const std::vector<double> s2 = sample_edge_default(psi.edge(1), graph.edges()[1].length);
  if (s1.size() != s2.size()) {
    fail(ErrorCode::GridMismatch, "active arms sampled on different grids");
  }
  std::vector<double> d1(n + 1), d2(n + 1);
  for (int i = 0; i <= n; ++i) {
    d1[i] = (s1[i] - s2[i]) / 2;
    d2[i] = (s2[i] - s1[i]) / 2;
  }
  GraphFunction out = GraphFunction::zeros(4);
  out.edge(0) = EdgeFunction::sampled(std::move(d1));
  out.edge(1) = EdgeFunction::sampled(std::move(d2));
  return out;
}

InvarianceReport check_B_invariance(const ControlOperator& B, const InvariantSubspace& subspace,
                                    int trials) {
  if (trials < 1) fail(ErrorCode::BadInput, "invariance check needs at least one trial");
  const MetricGraph& graph = subspace.graph();
  const int K = subspace.modes();

  std::mt19937 rng(0x1e7a11u);
  std::normal_distribution<double> gauss(0.0, 1.0);

  InvarianceReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> alpha(K);
    double norm_sq = 0;
    for (double& a : alpha) {
      a = gauss(rng);
      norm_sq += a * a;
    }
    if (norm_sq == 0) continue;
    const double inv_norm = 1.0 / std::sqrt(norm_sq);

    // ψ = Σ α_k f_k, assembled edge-wise on the default grid
    const double length = graph.edges()[0].length;
    const int n = default_intervals(length);
    std::vector<double> s1(n + 1, 0.0);
    for (int k = 1; k <= K; ++k) {
      const double a = alpha[k - 1] * inv_norm;
      for (int i = 0; i <= n; ++i) {
        s1[i] += a * std::sin(k * kPi * (length * i / n));
      }
    }
    std::vector<double> s2(n + 1);
    for (int i = 0; i <= n; ++i) s2[i] = -s1[i];
    GraphFunction psi = GraphFunction::zeros(4);
    psi.edge(0) = EdgeFunction::sampled(std::move(s1));
    psi.edge(1) = EdgeFunction::sampled(std::move(s2));

    const GraphFunction bpsi = B.apply(psi, graph);
    const GraphFunction proj = pattern_project(bpsi, graph);

    // leakage = Bψ - P(Bψ)
    GraphFunction leak = GraphFunction::zeros(4);
    for (int e = 0; e < 4; ++e) {
      const double le = graph.edges()[e].length;
      const std::vector<double> sb = sample_edge_default(bpsi.edge(e), le);
      const std::vector<double> sp = sample_edge_default(proj.edge(e), le);
      std::vector<double> diff(sb.size());
      for (size_t i = 0; i < sb.size(); ++i) diff[i] = sb[i] - sp[i];
      leak.edge(e) = EdgeFunction::sampled(std::move(diff));
    }
    report.worst_residual = std::max(report.worst_residual, l2_norm(leak, graph));
  }
  report.pass = report.worst_residual < 1e-10;
  return report;
}

ReducedProblem reduce_to_interval(const ControlOperator& B, const InvariantSubspace& subspace,
                                  int K) {
  if (K < 1) fail(ErrorCode::BadInput, "reduced problem needs at least one mode");
  if (B.num_edges() != 4) {
    fail(ErrorCode::GridMismatch, "operator edge count does not match the 4-edge star");
  }
  if (!profiles_equal(B.profile(0), B.profile(1))) {
    fail(ErrorCode::BadInput,
         "reduction needs identical profiles on the two active arms");
  }
  const InvarianceReport report = check_B_invariance(B, subspace);
  if (!report.pass) {
    fail(ErrorCode::NotInvariant, "operator leaks out of the subspace (worst residual " +
                                      std::to_string(report.worst_residual) + ")");
  }

  MetricGraph interval =
      make_interval(1.0, VertexCondition::Dirichlet, VertexCondition::Dirichlet);
  std::vector<EigenMode> modes(K);
  for (int k = 1; k <= K; ++k) {
    EigenMode& m = modes[k - 1];
    m.omega = k * kPi;
    m.lambda = m.omega * m.omega;
    m.edge_forms = {ClosedForm::sine(std::sqrt(2.0), m.omega, 0.0)};
  }
  Spectrum spectrum(interval, std::move(modes));
  ControlOperator multiplier({B.profile(0)});
  return ReducedProblem{std::move(interval), std::move(spectrum), std::move(multiplier)};
}

}  // namespace graphctl
