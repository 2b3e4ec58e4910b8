#include "graphctl/control_op.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace graphctl {
namespace {

constexpr double kPi = 3.14159265358979323846;

// |π² − 4L²λ| below this fraction of π² counts as a near-resonance of the
// half-period profile with the mode frequency; the analytic quotient loses
// digits there and the quadrature route takes over.
constexpr double kResonanceTol = 1e-6;

// ∫_0^L cos(πx/(2L)) cos(ωx + φ) dx for the two junction orientations a
// star edge can have (φ = 0: tip at x = 0; φ = -ωL: tip at x = L). Both reduce
// to a single quotient with denominator π² − 4L²ω².
double cosine_profile_integral(double length, double omega, double phase, double denom) {
  const double wl = omega * length;
  if (std::abs(phase) <= 1e-12 * std::max(1.0, wl)) {
    return 2.0 * kPi * length * std::cos(wl) / denom;
  }
  // cos(ω x - ωL) = cos(ω(L - x)); substituting ξ = L - x turns the profile
  // into sin(πξ/(2L)).
  return (2.0 * kPi * length - 4.0 * length * length * omega * std::sin(wl)) / denom;
}

std::vector<double> profile_samples(const EdgeProfile& p, double length, int n) {
  std::vector<double> out(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double x = length * static_cast<double>(i) / n;
    double v = 0;
    switch (p.kind) {
      case EdgeProfile::Kind::None:
        v = 0;
        break;
      case EdgeProfile::Kind::Cosine:
        v = std::cos(kPi * x / (2.0 * length));
        break;
      case EdgeProfile::Kind::Monomial:
        v = std::pow(x, p.power);
        break;
      case EdgeProfile::Kind::Sampled: {
        const auto& s = p.values;
        const double t = x / length * (static_cast<double>(s.size()) - 1.0);
        const auto lo = static_cast<size_t>(std::clamp(
            std::floor(t), 0.0, static_cast<double>(s.size()) - 2.0));
        const double w = t - static_cast<double>(lo);
        v = (1.0 - w) * s[lo] + w * s[lo + 1];
        break;
      }
    }
    out[i] = p.scale * v;
  }
  return out;
}

}  // namespace

ControlOperator::ControlOperator(std::vector<EdgeProfile> profiles)
    : profiles_(std::move(profiles)) {
  if (profiles_.empty()) fail(ErrorCode::BadInput, "control operator needs at least one edge");
  bool any = false;
  for (size_t e = 0; e < profiles_.size(); ++e) {
    const auto& p = profiles_[e];
    if (!std::isfinite(p.scale)) {
      fail(ErrorCode::BadInput, "non-finite profile scale on edge " + std::to_string(e));
    }
    if (p.kind == EdgeProfile::Kind::Monomial && p.power < 0) {
      fail(ErrorCode::BadInput, "monomial profile needs power >= 0 on edge " + std::to_string(e));
    }
    if (p.kind == EdgeProfile::Kind::Sampled && p.values.size() < 2) {
      fail(ErrorCode::BadInput, "sampled profile needs at least two values on edge " +
                                    std::to_string(e));
    }
    if (p.kind != EdgeProfile::Kind::None) any = true;
  }
  if (!any) fail(ErrorCode::BadInput, "control operator has no active profile");
}

double ControlOperator::profile_value(int e, double x, double length) const {
  const auto& p = profiles_.at(e);
  switch (p.kind) {
    case EdgeProfile::Kind::None:
      return 0;
    case EdgeProfile::Kind::Cosine:
      return p.scale * std::cos(kPi * x / (2.0 * length));
    case EdgeProfile::Kind::Monomial:
      return p.scale * std::pow(x, p.power);
    case EdgeProfile::Kind::Sampled: {
      // uniform grid over [0, L], linear interpolation between nodes
      const auto& s = p.values;
      const double t = x / length * (static_cast<double>(s.size()) - 1.0);
      const auto lo = static_cast<size_t>(std::clamp(
          std::floor(t), 0.0, static_cast<double>(s.size()) - 2.0));
      const double w = t - static_cast<double>(lo);
      return p.scale * ((1.0 - w) * s[lo] + w * s[lo + 1]);
    }
  }
  return 0;
}

GraphFunction ControlOperator::apply(const GraphFunction& psi, const MetricGraph& graph) const {
  if (psi.num_edges() != graph.num_edges() || num_edges() != graph.num_edges()) {
    fail(ErrorCode::GridMismatch, "edge count mismatch between operator, state, and graph");
  }
  GraphFunction out = GraphFunction::zeros(graph.num_edges());
  for (int e = 0; e < graph.num_edges(); ++e) {
    const auto& p = profiles_[e];
    if (p.kind == EdgeProfile::Kind::None || p.scale == 0.0) continue;
    const double length = graph.edges()[e].length;
    const EdgeFunction& f = psi.edge(e);

    // products that stay inside the closed-form family
    if (f.is_closed() && f.form().kind == ClosedForm::Kind::Constant &&
        p.kind != EdgeProfile::Kind::Sampled) {
      const double c = p.scale * f.form().amp;
      if (p.kind == EdgeProfile::Kind::Cosine) {
        out.edge(e) = EdgeFunction::closed(ClosedForm::cosine(c, kPi / (2.0 * length)));
      } else {
        out.edge(e) = EdgeFunction::closed(ClosedForm::monomial(c, p.power));
      }
      continue;
    }

    const int n = default_intervals(length);
    std::vector<double> prod = profile_samples(p, length, n);
    if (f.is_closed()) {
      for (int i = 0; i <= n; ++i) {
        prod[i] *= f.form().eval(length * static_cast<double>(i) / n);
      }
    } else {
      const auto& s = f.samples();
      if (static_cast<int>(s.size()) != n + 1) {
        fail(ErrorCode::GridMismatch, "sampled state does not use the default grid on edge " +
                                          std::to_string(e));
      }
      for (int i = 0; i <= n; ++i) prod[i] *= s[i];
    }
    out.edge(e) = EdgeFunction::sampled(std::move(prod));
  }
  return out;
}

ControlOperator ControlOperator::scaled(double c) const {
  std::vector<EdgeProfile> scaled = profiles_;
  for (auto& p : scaled) p.scale *= c;
  return ControlOperator(std::move(scaled));
}

ControlOperator ControlOperator::cosine_on_edge(int edge, int num_edges, double scale) {
  if (edge < 0 || edge >= num_edges) fail(ErrorCode::IndexOutOfRange, "profile edge out of range");
  std::vector<EdgeProfile> profiles(num_edges);
  profiles[edge] = EdgeProfile::cosine(scale);
  return ControlOperator(std::move(profiles));
}

ControlOperator ControlOperator::monomial_on_edge(int edge, int num_edges, int power,
                                                  double scale) {
  if (edge < 0 || edge >= num_edges) fail(ErrorCode::IndexOutOfRange, "profile edge out of range");
  std::vector<EdgeProfile> profiles(num_edges);
  profiles[edge] = EdgeProfile::monomial(power, scale);
  return ControlOperator(std::move(profiles));
}

namespace {

// Detect the configuration with a dedicated analytic coupling path: a star
// whose mode j is edge-wise constant (the flat ground state) and an operator
// with exactly one active profile, of cosine shape.
bool star_cosine_closed_form(const ControlOperator& B, const Spectrum& spectrum, int j,
                             int* profile_edge) {
  if (spectrum.graph().kind() != GraphKind::Star) return false;
  const EigenMode& mj = spectrum.mode(j);
  for (const auto& f : mj.edge_forms) {
    if (f.kind != ClosedForm::Kind::Constant) return false;
  }
  int active = -1;
  for (int e = 0; e < B.num_edges(); ++e) {
    if (B.profile(e).kind == EdgeProfile::Kind::None) continue;
    if (active >= 0 || B.profile(e).kind != EdgeProfile::Kind::Cosine) return false;
    active = e;
  }
  if (active < 0) return false;
  *profile_edge = active;
  return true;
}

double sampled_edge_coupling(const ControlOperator& B, const Spectrum& spectrum, int j, int k,
                             int e) {
  const double length = spectrum.graph().edges()[e].length;
  const int n = default_intervals(length);
  const ClosedForm& fj = spectrum.mode(j).edge_forms[e];
  const ClosedForm& fk = spectrum.mode(k).edge_forms[e];
  std::vector<double> prod(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double x = length * static_cast<double>(i) / n;
    prod[i] = B.profile_value(e, x, length) * fj.eval(x) * fk.eval(x);
  }
  return simpson(prod, length);
}

}  // namespace

double coupling(const ControlOperator& B, const Spectrum& spectrum, int j, int k) {
  const MetricGraph& graph = spectrum.graph();
  if (B.num_edges() != graph.num_edges()) {
    fail(ErrorCode::GridMismatch, "operator edge count does not match the graph");
  }
  int e = -1;
  if (star_cosine_closed_form(B, spectrum, j, &e)) {
    const double length = graph.edges()[e].length;
    const double scale = B.profile(e).scale;
    const double cj = spectrum.mode(j).edge_forms[e].amp;
    const ClosedForm& fk = spectrum.mode(k).edge_forms[e];
    const double denom = kPi * kPi - 4.0 * length * length * spectrum.lambda(k);
    if (std::abs(denom) < kResonanceTol * kPi * kPi) {
      // profile nearly resonant with the mode on this edge
      return sampled_edge_coupling(B, spectrum, j, k, e);
    }
    if (fk.kind == ClosedForm::Kind::Constant) {
      return scale * cj * fk.amp * 2.0 * length / kPi;
    }
    if (fk.kind == ClosedForm::Kind::Cosine) {
      return scale * cj * fk.amp *
             cosine_profile_integral(length, fk.omega, fk.phase, denom);
    }
    // fall through for shapes outside the analytic table (e.g. sine modes)
  }
  const GraphFunction bphi = B.apply(spectrum.eigenfunction(j), graph);
  return inner_product(bphi, spectrum.eigenfunction(k), graph);
}

double coupling_quadrature(const ControlOperator& B, const Spectrum& spectrum, int j, int k) {
  const MetricGraph& graph = spectrum.graph();
  if (B.num_edges() != graph.num_edges()) {
    fail(ErrorCode::GridMismatch, "operator edge count does not match the graph");
  }
  const EigenMode& mj = spectrum.mode(j);
  const EigenMode& mk = spectrum.mode(k);
  double total = 0;
  for (int e = 0; e < graph.num_edges(); ++e) {
    if (B.profile(e).kind == EdgeProfile::Kind::None) continue;
    const double length = graph.edges()[e].length;
    const int n = default_intervals(length);
    std::vector<double> prod(n + 1);
    for (int i = 0; i <= n; ++i) {
      const double x = length * static_cast<double>(i) / n;
      prod[i] = B.profile_value(e, x, length) * mj.edge_forms[e].eval(x) *
                mk.edge_forms[e].eval(x);
    }
    total += simpson(prod, length);
  }
  return total;
}

Eigen::MatrixXd coupling_matrix(const ControlOperator& B, const Spectrum& spectrum, int N) {
  if (N < 1) fail(ErrorCode::BadInput, "coupling matrix needs N >= 1");
  (void)spectrum.lambdas(N);  // bounds check: InsufficientSpectrum past the end
  Eigen::MatrixXd M(N, N);
  for (int m = 1; m <= N; ++m) {
    for (int k = m; k <= N; ++k) {
      const double v = coupling(B, spectrum, m, k);
      M(m - 1, k - 1) = v;
      M(k - 1, m - 1) = v;  // B is a real multiplication operator
    }
  }
  return M;
}

SpreadingReport verify_spreading(const ControlOperator& B, const Spectrum& spectrum, int j,
                                 int N) {
  if (N < 10) fail(ErrorCode::BadInput, "spreading check needs at least 10 modes");
  (void)spectrum.lambdas(N);
  if (j < 1 || j > N) fail(ErrorCode::IndexOutOfRange, "reference mode outside 1..N");

  SpreadingReport report;
  report.j = j;
  report.modes = N;
  report.couplings.resize(N);
  for (int k = 1; k <= N; ++k) report.couplings[k - 1] = coupling(B, spectrum, j, k);

  report.first_coupling = report.couplings[0];
  if (std::abs(report.first_coupling) <= 1e-12) {
    fail(ErrorCode::FirstCouplingZero,
         "coupling of mode " + std::to_string(j) + " against the ground state vanishes");
  }

  // Couplings at the floor cannot support any polynomial lower bound; collect
  // them and fit the decay exponent over the remaining k >= 2.
  std::vector<int> fit_k;
  for (int k = 2; k <= N; ++k) {
    if (std::abs(report.couplings[k - 1]) < 1e-14) {
      report.floor_failures.push_back(k);
    } else {
      fit_k.push_back(k);
    }
  }

  if (fit_k.size() >= 2) {
    // least squares for log|b_k| ≈ c - q log λ_k
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k : fit_k) {
      const double x = std::log(spectrum.lambda(k));
      const double y = std::log(std::abs(report.couplings[k - 1]));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double n = static_cast<double>(fit_k.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    report.q = std::max(0.0, -slope);
  }

  double worst = 0;
  for (int k : fit_k) {
    const double v = std::pow(spectrum.lambda(k), report.q) * std::abs(report.couplings[k - 1]);
    if (report.worst_k == 0 || v < worst) {
      worst = v;
      report.worst_k = k;
    }
  }
  report.b = report.worst_k == 0 ? 0 : worst;
  report.pass = report.floor_failures.empty() && report.b > 0;
  return report;
}

}  // namespace graphctl
