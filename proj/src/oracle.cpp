#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "graphctl/spectral.hpp"

namespace graphctl {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Mesh bookkeeping: one shared unknown per non-Dirichlet vertex, one unknown
// per interior node of every edge.
struct OracleMesh {
  std::vector<int> intervals;              // n_j per edge
  std::vector<std::vector<int>> node_dof;  // per edge, node 0..n_j -> dof or -1
  int ndof = 0;
};

OracleMesh build_mesh(const MetricGraph& g, double h) {
  OracleMesh mesh;
  std::map<int, int> vertex_dof;
  for (const Vertex& v : g.vertices()) {
    vertex_dof[v.id] = v.condition == VertexCondition::Dirichlet ? -1 : mesh.ndof++;
  }
  for (const Edge& e : g.edges()) {
    const int n = std::max(16, static_cast<int>(std::ceil(e.length / h)));
    mesh.intervals.push_back(n);
    std::vector<int> dofs(n + 1);
    dofs[0] = vertex_dof.at(e.from);
    for (int i = 1; i < n; ++i) dofs[i] = mesh.ndof++;
    dofs[n] = vertex_dof.at(e.to);
    mesh.node_dof.push_back(std::move(dofs));
  }
  return mesh;
}

// Negative-pivot count of the LDLT factorization of A - xI; used as the
// eigenvalue counting function for spectrum slicing. Retries with a growing
// diagonal jitter when the unpivoted factorization breaks down.
struct InertiaCounter {
  const SpMat& A;
  SpMat identity;

  explicit InertiaCounter(const SpMat& A_) : A(A_), identity(A_.rows(), A_.cols()) {
    identity.setIdentity();
  }

  int count_below(double x) const {
    double jitter = 0;
    for (int attempt = 0; attempt < 6; ++attempt) {
      SpMat shifted = A - (x + jitter) * identity;
      Eigen::SimplicialLDLT<SpMat> ldlt(shifted);
      if (ldlt.info() == Eigen::Success) {
        const auto d = ldlt.vectorD();
        bool clean = true;
        int negatives = 0;
        for (Eigen::Index i = 0; i < d.size(); ++i) {
          if (!std::isfinite(d[i]) || d[i] == 0) {
            clean = false;
            break;
          }
          if (d[i] < 0) ++negatives;
        }
        if (clean) return negatives;
      }
      jitter = (jitter == 0 ? 1e-12 : 10 * jitter) * std::max(1.0, std::abs(x));
    }
    fail(ErrorCode::EigensolverFailure,
         "inertia factorization failed near x = " + std::to_string(x));
  }
};

}  // namespace

OracleResult discretize_oracle(const MetricGraph& g, double h, int K) {
  if (!(h > 0)) fail(ErrorCode::BadInput, "mesh width must be positive");
  if (K < 1) fail(ErrorCode::BadInput, "eigenvalue count must be positive");
  if (h > g.min_edge_length() / 16) {
    fail(ErrorCode::MeshTooCoarse, "mesh width " + std::to_string(h) + " exceeds min length/16");
  }
  const OracleMesh mesh = build_mesh(g, h);
  if (K > mesh.ndof) {
    fail(ErrorCode::BadInput, "mesh resolves only " + std::to_string(mesh.ndof) + " unknowns");
  }

  // P1 stiffness and lumped mass; Dirichlet nodes are eliminated.
  std::vector<Triplet> strips;
  std::vector<double> massv(mesh.ndof, 0.0);
  for (int e = 0; e < g.num_edges(); ++e) {
    const int n = mesh.intervals[e];
    const double he = g.edges()[e].length / n;
    const auto& dofs = mesh.node_dof[e];
    for (int i = 0; i < n; ++i) {
      const int a = dofs[i], b = dofs[i + 1];
      if (a >= 0) {
        strips.emplace_back(a, a, 1 / he);
        massv[a] += he / 2;
      }
      if (b >= 0) {
        strips.emplace_back(b, b, 1 / he);
        massv[b] += he / 2;
      }
      if (a >= 0 && b >= 0) {
        strips.emplace_back(a, b, -1 / he);
        strips.emplace_back(b, a, -1 / he);
      }
    }
  }
  std::vector<double> dinv(mesh.ndof);
  for (int i = 0; i < mesh.ndof; ++i) dinv[i] = 1 / std::sqrt(massv[i]);

  // symmetric reduction A = M^{-1/2} S M^{-1/2} of the generalized pencil
  for (Triplet& t : strips) t = Triplet(t.row(), t.col(), t.value() * dinv[t.row()] * dinv[t.col()]);
  SpMat A(mesh.ndof, mesh.ndof);
  A.setFromTriplets(strips.begin(), strips.end());

  double gersh = 0;
  {
    std::vector<double> rowsum(mesh.ndof, 0.0);
    for (int k = 0; k < A.outerSize(); ++k) {
      for (SpMat::InnerIterator it(A, k); it; ++it) rowsum[it.row()] += std::abs(it.value());
    }
    gersh = *std::max_element(rowsum.begin(), rowsum.end());
  }

  const InertiaCounter counter(A);
  std::vector<double> lambdas(K);
  for (int k = 1; k <= K; ++k) {
    double lo = -1e-9 * std::max(1.0, gersh);
    double hi = gersh + 1;
    for (int iter = 0; iter < 55; ++iter) {
      const double mid = 0.5 * (lo + hi);
      (counter.count_below(mid) >= k ? hi : lo) = mid;
    }
    lambdas[k - 1] = 0.5 * (lo + hi);
  }

  // Sampled eigenvectors by shifted inverse iteration; members of a close
  // cluster are orthogonalized against each other.
  OracleResult result;
  result.h = h;
  std::vector<Eigen::VectorXd> ys;
  SpMat identity(mesh.ndof, mesh.ndof);
  identity.setIdentity();
  for (int k = 0; k < K; ++k) {
    const double lam = lambdas[k];
    double shift = 1e-7 * (1 + std::abs(lam));
    Eigen::SimplicialLDLT<SpMat> ldlt;
    for (int attempt = 0;; ++attempt) {
      ldlt.compute(A - (lam + shift) * identity);
      if (ldlt.info() == Eigen::Success) break;
      if (attempt >= 5) fail(ErrorCode::EigensolverFailure, "inverse-iteration factorization failed");
      shift *= 10;
    }
    Eigen::VectorXd y(mesh.ndof);
    for (int i = 0; i < mesh.ndof; ++i) y[i] = std::sin(0.7 + 1.3 * i) + 0.01;
    y.normalize();
    for (int sweep = 0; sweep < 4; ++sweep) {
      y = ldlt.solve(y);
      for (int j = 0; j < k; ++j) {
        if (std::abs(lambdas[j] - lam) < 1e-6 * (1 + std::abs(lam))) y -= ys[j].dot(y) * ys[j];
      }
      const double nn = y.norm();
      if (!(nn > 0) || !std::isfinite(nn)) {
        fail(ErrorCode::EigensolverFailure, "inverse iteration collapsed");
      }
      y /= nn;
    }
    ys.push_back(y);

    Eigen::VectorXd v(mesh.ndof);
    for (int i = 0; i < mesh.ndof; ++i) v[i] = y[i] * dinv[i];
    int imax = 0;
    for (int i = 1; i < mesh.ndof; ++i) {
      if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    }
    if (v[imax] < 0) v = -v;

    OracleMode om;
    om.lambda = lam;
    for (int e = 0; e < g.num_edges(); ++e) {
      const auto& dofs = mesh.node_dof[e];
      std::vector<double> samples(dofs.size());
      for (size_t i = 0; i < dofs.size(); ++i) samples[i] = dofs[i] < 0 ? 0.0 : v[dofs[i]];
      om.edge_samples.push_back(std::move(samples));
    }
    result.modes.push_back(std::move(om));
  }
  return result;
}

}  // namespace graphctl
