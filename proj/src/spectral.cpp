#include "graphctl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace graphctl {

namespace {

constexpr double kPi = std::numbers::pi;

// Relative tolerance for treating two frequencies as one eigenvalue and for
// clustering coincident secular poles.
constexpr double kOmegaTol = 1e-9;

std::string bracket_text(double lo, double hi, double flo, double fhi) {
  std::ostringstream os;
  os << "bracket [" << lo << ", " << hi << "] has values (" << flo << ", " << fhi << ")";
  return os.str();
}

// Terms of a secular function: coefficient · tan(x·scale) or, for the
// Dirichlet star, cot(x·scale).
struct SecularShape {
  std::vector<double> scales;
  std::vector<double> coeffs;
  bool cotangent = false;
};

SecularShape secular_shape(SecularKind kind, const std::vector<double>& lengths) {
  if (lengths.empty()) fail(ErrorCode::BadInput, "secular function needs lengths");
  for (double L : lengths) {
    if (!(L > 0)) fail(ErrorCode::BadInput, "secular lengths must be positive");
  }
  SecularShape s;
  switch (kind) {
    case SecularKind::Star:
      s.scales = lengths;
      s.coeffs.assign(lengths.size(), 1.0);
      return s;
    case SecularKind::StarDirichlet:
      s.scales = lengths;
      s.coeffs.assign(lengths.size(), 1.0);
      s.cotangent = true;
      return s;
    case SecularKind::TadpoleSymmetric:
      if (lengths.size() != 2) {
        fail(ErrorCode::BadInput, "tadpole secular function needs (L1, L2)");
      }
      s.scales = {lengths[0] / 2, lengths[1]};
      s.coeffs = {2.0, 1.0};
      return s;
  }
  fail(ErrorCode::BadInput, "unknown secular kind");
}

// Distance from y to the nearest pole of tan (odd multiples of π/2) or cot
// (multiples of π).
double pole_distance(double y, bool cotangent) {
  if (cotangent) return std::abs(y - kPi * std::round(y / kPi));
  const double m = std::round(y / kPi - 0.5);
  return std::abs(y - kPi * (m + 0.5));
}

void check_poles(const SecularShape& s, double x) {
  for (double scale : s.scales) {
    const double dist = pole_distance(x * scale, s.cotangent) / scale;
    if (dist <= 1e-12 * x) {
      fail(ErrorCode::PoleProximity,
           "x = " + std::to_string(x) + " is within " + std::to_string(dist) +
               " of a secular pole");
    }
  }
}

double shape_value(const SecularShape& s, double x) {
  check_poles(s, x);
  double total = 0;
  for (size_t i = 0; i < s.scales.size(); ++i) {
    const double y = x * s.scales[i];
    const double t = s.cotangent ? std::cos(y) / std::sin(y) : std::tan(y);
    total += s.coeffs[i] * t;
  }
  return total;
}

// d/dx of the secular function: Σ c·L/cos²(xL), or −Σ c·L/sin²(xL) for cot.
double shape_derivative(const SecularShape& s, double x) {
  double total = 0;
  for (size_t i = 0; i < s.scales.size(); ++i) {
    const double y = x * s.scales[i];
    const double d = s.cotangent ? std::sin(y) : std::cos(y);
    total += s.coeffs[i] * s.scales[i] / (d * d);
  }
  return s.cotangent ? -total : total;
}

// Monotone root in the pole-free gap (lo, hi): bisection bracket maintained
// around safeguarded Newton steps, capped at 60 iterations.
double find_shape_root(const SecularShape& s, double lo, double hi) {
  const bool increasing = !s.cotangent;
  const double width = hi - lo;
  const double shrink = std::max(width * 1e-9, 4e-12 * std::max(1.0, hi));
  double a = lo + shrink;
  double b = hi - shrink;
  if (!(a < b)) {
    fail(ErrorCode::RootIsolationFailure,
         "gap (" + std::to_string(lo) + ", " + std::to_string(hi) + ") is too narrow");
  }
  const double fa = shape_value(s, a);
  const double fb = shape_value(s, b);
  const bool bracketed = increasing ? (fa < 0 && fb > 0) : (fa > 0 && fb < 0);
  if (!bracketed) {
    fail(ErrorCode::RootIsolationFailure, "no sign change: " + bracket_text(a, b, fa, fb));
  }
  double x = 0.5 * (a + b);
  for (int iter = 0; iter < 60; ++iter) {
    const double fx = shape_value(s, x);
    if (fx == 0) break;
    const bool root_right = increasing ? (fx < 0) : (fx > 0);
    (root_right ? a : b) = x;
    double next = x - fx / shape_derivative(s, x);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::abs(next - x) <= 1e-15 * std::abs(x)) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

// All poles of the secular terms up to X, clustered when several terms share a
// pole location (the degenerate-eigenvalue mechanism for stars).
struct PoleGroup {
  double x = 0;
  std::vector<int> terms;
};

std::vector<PoleGroup> poles_up_to(const SecularShape& s, double X) {
  std::vector<std::pair<double, int>> raw;
  for (size_t i = 0; i < s.scales.size(); ++i) {
    const double step = kPi / s.scales[i];
    double x = s.cotangent ? step : step / 2;
    for (; x <= X; x += step) raw.emplace_back(x, static_cast<int>(i));
  }
  std::sort(raw.begin(), raw.end());
  std::vector<PoleGroup> groups;
  for (const auto& [x, term] : raw) {
    if (!groups.empty() && x - groups.back().x <= kOmegaTol * std::max(1.0, x)) {
      PoleGroup& g = groups.back();
      // keep the running mean as the shared location
      g.x = (g.x * g.terms.size() + x) / (g.terms.size() + 1);
      g.terms.push_back(term);
    } else {
      groups.push_back({x, {term}});
    }
  }
  return groups;
}

void flag_multiplicities(std::vector<EigenMode>& modes) {
  size_t i = 0;
  while (i < modes.size()) {
    size_t j = i + 1;
    while (j < modes.size() &&
           modes[j].omega - modes[i].omega <= kOmegaTol * std::max(1.0, modes[j].omega)) {
      ++j;
    }
    const int mult = static_cast<int>(j - i);
    for (size_t m = i; m < j; ++m) {
      modes[m].multiple = mult > 1;
      modes[m].multiplicity = mult;
    }
    i = j;
  }
}

// ---------------------------------------------------------------------------
// Star solver. Edge l carries a·cos(ω ξ) (Neumann tips) or a·sin(ω ξ)
// (Dirichlet tips) in the distance-from-tip coordinate ξ; continuity and flux
// balance at the junction reduce to the tangent/cotangent secular equation.

struct StarLayout {
  std::vector<double> lengths;
  std::vector<bool> tip_at_zero;
  bool dirichlet = false;
};

StarLayout star_layout(const MetricGraph& g) {
  int center = -1;
  for (const Vertex& v : g.vertices()) {
    if (v.condition == VertexCondition::NeumannKirchhoff) {
      if (center >= 0) fail(ErrorCode::UnsupportedKind, "star must have a single junction");
      center = v.id;
    }
  }
  if (center < 0) fail(ErrorCode::UnsupportedKind, "star has no junction vertex");
  StarLayout lay;
  int dirichlet_tips = 0;
  for (const Edge& e : g.edges()) {
    const bool from_center = e.from == center;
    const bool to_center = e.to == center;
    if (from_center == to_center) {
      fail(ErrorCode::UnsupportedKind, "star edges must join a tip to the junction");
    }
    const int tip = from_center ? e.to : e.from;
    lay.lengths.push_back(e.length);
    lay.tip_at_zero.push_back(to_center);
    if (g.vertex(tip).condition == VertexCondition::Dirichlet) ++dirichlet_tips;
  }
  if (dirichlet_tips != 0 && dirichlet_tips != g.num_edges()) {
    fail(ErrorCode::UnsupportedKind, "star tips must be uniformly Neumann or Dirichlet");
  }
  lay.dirichlet = dirichlet_tips > 0;
  return lay;
}

// Trig form with amplitude a in the ξ coordinate of edge l, translated to the
// native x coordinate of the edge.
ClosedForm star_edge_form(const StarLayout& lay, int l, double a, double omega, bool sine) {
  if (lay.tip_at_zero[l]) {
    return sine ? ClosedForm::sine(a, omega, 0) : ClosedForm::cosine(a, omega, 0);
  }
  const double L = lay.lengths[l];
  // ξ = L − x: cos(ωξ) = cos(ωx − ωL), sin(ωξ) = −sin(ωx − ωL)
  return sine ? ClosedForm::sine(-a, omega, -omega * L) : ClosedForm::cosine(a, omega, -omega * L);
}

EigenMode star_secular_mode(const StarLayout& lay, double omega) {
  const int E = static_cast<int>(lay.lengths.size());
  std::vector<double> tipval(E);
  for (int l = 0; l < E; ++l) {
    const double y = omega * lay.lengths[l];
    tipval[l] = lay.dirichlet ? std::sin(y) : std::cos(y);
  }
  // a_l ∝ 1/tipval_l; the cross terms in the per-edge norms cancel exactly at
  // secular roots, leaving Σ a_l² L_l / 2 = 1.
  double norm2 = 0;
  for (int l = 0; l < E; ++l) {
    const double r = tipval[0] / tipval[l];
    norm2 += r * r * lay.lengths[l] / 2;
  }
  const double a1 = 1 / std::sqrt(norm2);
  EigenMode m;
  m.omega = omega;
  m.lambda = omega * omega;
  for (int l = 0; l < E; ++l) {
    m.edge_forms.push_back(
        star_edge_form(lay, l, a1 * tipval[0] / tipval[l], omega, lay.dirichlet));
  }
  return m;
}

// Degenerate family at a pole shared by the edges in `S`: modes vanish at the
// junction and live on S only, with amplitudes constrained by flux balance
// Σ σ_l a_l = 0. A Helmert-style ladder gives an orthonormal basis under the
// weighted inner product Σ a_l b_l L_l/2.
std::vector<EigenMode> star_family_modes(const StarLayout& lay, double omega,
                                         const std::vector<int>& S) {
  const int n = static_cast<int>(S.size());
  std::vector<double> sigma(n), wgt(n);
  for (int i = 0; i < n; ++i) {
    const double y = omega * lay.lengths[S[i]];
    const double sv = lay.dirichlet ? std::cos(y) : std::sin(y);
    sigma[i] = sv >= 0 ? 1.0 : -1.0;
    wgt[i] = lay.lengths[S[i]] / 2;
  }
  std::vector<EigenMode> out;
  double inv_sum = 0;  // Σ_{m<i} 1/w_m
  for (int i = 1; i < n; ++i) {
    inv_sum += 1 / wgt[i - 1];
    const double c = 1 / std::sqrt(inv_sum * (1 + inv_sum * wgt[i]));
    std::vector<double> t(n, 0.0);
    for (int m = 0; m < i; ++m) t[m] = c / wgt[m];
    t[i] = -c * inv_sum;
    EigenMode mode;
    mode.omega = omega;
    mode.lambda = omega * omega;
    mode.edge_forms.assign(lay.lengths.size(), ClosedForm::constant(0));
    for (int m = 0; m < n; ++m) {
      const double a = sigma[0] * sigma[m] * t[m];  // overall sign: first amplitude > 0
      mode.edge_forms[S[m]] = star_edge_form(lay, S[m], a, omega, lay.dirichlet);
    }
    out.push_back(std::move(mode));
  }
  return out;
}

std::vector<EigenMode> solve_star(const MetricGraph& g, int K) {
  const StarLayout lay = star_layout(g);
  SecularShape shape;
  shape.scales = lay.lengths;
  shape.coeffs.assign(lay.lengths.size(), 1.0);
  shape.cotangent = lay.dirichlet;

  const int want = K + 4;  // margin so multiplicity flags at the cut are right
  double X = kPi * (want + 2) / g.total_length() + kPi / g.min_edge_length();
  std::vector<EigenMode> modes;
  while (true) {
    modes.clear();
    if (!lay.dirichlet) {
      EigenMode m0;
      m0.edge_forms.assign(lay.lengths.size(),
                           ClosedForm::constant(1 / std::sqrt(g.total_length())));
      modes.push_back(std::move(m0));
    }
    double prev = 0;
    for (const PoleGroup& group : poles_up_to(shape, X)) {
      // tan-type secular functions rise from 0 at ω = 0⁺, so the first gap
      // holds no root; cot-type fall from +∞ and yield one in every gap.
      if (lay.dirichlet || prev > 0) {
        modes.push_back(star_secular_mode(lay, find_shape_root(shape, prev, group.x)));
      }
      if (group.terms.size() >= 2) {
        for (EigenMode& fam : star_family_modes(lay, group.x, group.terms)) {
          modes.push_back(std::move(fam));
        }
      }
      prev = group.x;
      if (static_cast<int>(modes.size()) >= want) break;
    }
    if (static_cast<int>(modes.size()) >= want) break;
    X *= 1.5;
  }
  flag_multiplicities(modes);
  modes.resize(K);
  return modes;
}

// ---------------------------------------------------------------------------
// Tadpole solver: loop of length L₁ attached to a tail of length L₂ with a
// Neumann tip. Eigenfunctions split into a skew family supported on the loop
// and a symmetric family from the 2·tan + tan secular equation.

struct TadpoleLayout {
  int loop_edge = 0;
  int tail_edge = 0;
  double L1 = 0, L2 = 0;
  bool tail_tip_at_zero = true;
};

TadpoleLayout tadpole_layout(const MetricGraph& g) {
  if (g.num_edges() != 2) fail(ErrorCode::UnsupportedKind, "tadpole must have two edges");
  TadpoleLayout lay;
  const bool first_is_loop = g.edges()[0].from == g.edges()[0].to;
  const bool second_is_loop = g.edges()[1].from == g.edges()[1].to;
  if (first_is_loop == second_is_loop) {
    fail(ErrorCode::UnsupportedKind, "tadpole needs exactly one loop edge");
  }
  lay.loop_edge = first_is_loop ? 0 : 1;
  lay.tail_edge = 1 - lay.loop_edge;
  const Edge& loop = g.edges()[lay.loop_edge];
  const Edge& tail = g.edges()[lay.tail_edge];
  lay.L1 = loop.length;
  lay.L2 = tail.length;
  const int junction = loop.from;
  const int tip = tail.from == junction ? tail.to : tail.from;
  lay.tail_tip_at_zero = tail.from == tip;
  if (g.vertex(tip).condition != VertexCondition::Neumann) {
    fail(ErrorCode::UnsupportedKind, "tadpole tail tip must be Neumann");
  }
  return lay;
}

ClosedForm tail_form(const TadpoleLayout& lay, double a, double omega) {
  if (lay.tail_tip_at_zero) return ClosedForm::cosine(a, omega, 0);
  return ClosedForm::cosine(a, omega, -omega * lay.L2);
}

std::vector<EigenMode> solve_tadpole(const MetricGraph& g, int K) {
  const TadpoleLayout lay = tadpole_layout(g);
  SecularShape shape = secular_shape(SecularKind::TadpoleSymmetric, {lay.L1, lay.L2});

  const int want = K + 4;
  double X = kPi * (want + 2) / g.total_length() + 2 * kPi / lay.L1;
  std::vector<EigenMode> modes;
  while (true) {
    modes.clear();
    EigenMode m0;
    m0.symmetry = ModeSymmetry::Symmetric;
    m0.edge_forms.assign(2, ClosedForm::constant(1 / std::sqrt(g.total_length())));
    modes.push_back(std::move(m0));

    double prev = 0;
    for (const PoleGroup& group : poles_up_to(shape, X)) {
      if (group.terms.size() >= 2) {
        fail(ErrorCode::RootIsolationFailure,
             "coincident poles of the tadpole secular function at x = " +
                 std::to_string(group.x));
      }
      if (prev > 0) {
        const double omega = find_shape_root(shape, prev, group.x);
        const double c1 = std::cos(omega * lay.L1 / 2);
        const double c2 = std::cos(omega * lay.L2);
        const double a1 = std::sqrt(2 * c2 * c2 / (lay.L1 * c2 * c2 + lay.L2 * c1 * c1));
        EigenMode m;
        m.omega = omega;
        m.lambda = omega * omega;
        m.symmetry = ModeSymmetry::Symmetric;
        m.edge_forms.assign(2, ClosedForm::constant(0));
        // symmetric about the loop midpoint; tail amplitude from continuity
        m.edge_forms[lay.loop_edge] = ClosedForm::cosine(a1, omega, -omega * lay.L1 / 2);
        m.edge_forms[lay.tail_edge] = tail_form(lay, a1 * c1 / c2, omega);
        modes.push_back(std::move(m));
      }
      prev = group.x;
    }
    for (int k = 1; 2 * k * kPi / lay.L1 <= X; ++k) {
      const double omega = 2 * k * kPi / lay.L1;
      EigenMode m;
      m.omega = omega;
      m.lambda = omega * omega;
      m.symmetry = ModeSymmetry::Skew;
      m.edge_forms.assign(2, ClosedForm::constant(0));
      m.edge_forms[lay.loop_edge] = ClosedForm::sine(std::sqrt(2 / lay.L1), omega, 0);
      modes.push_back(std::move(m));
    }
    std::stable_sort(modes.begin(), modes.end(),
                     [](const EigenMode& a, const EigenMode& b) { return a.omega < b.omega; });
    if (static_cast<int>(modes.size()) >= want) break;
    X *= 1.5;
  }
  flag_multiplicities(modes);
  modes.resize(K);
  return modes;
}

}  // namespace

double secular_value(SecularKind kind, double x, const std::vector<double>& lengths) {
  if (!(x > 0)) fail(ErrorCode::BadInput, "secular argument must be positive");
  return shape_value(secular_shape(kind, lengths), x);
}

const char* symmetry_name(ModeSymmetry s) {
  switch (s) {
    case ModeSymmetry::None: return "-";
    case ModeSymmetry::Symmetric: return "symmetric";
    case ModeSymmetry::Skew: return "skew";
  }
  return "?";
}

Spectrum::Spectrum(MetricGraph graph, std::vector<EigenMode> modes)
    : graph_(std::move(graph)), modes_(std::move(modes)) {
  for (size_t i = 0; i < modes_.size(); ++i) {
    if (static_cast<int>(modes_[i].edge_forms.size()) != graph_.num_edges()) {
      fail(ErrorCode::BadInput, "eigenmode is missing per-edge forms");
    }
    if (i > 0 && modes_[i].lambda < modes_[i - 1].lambda - 1e-12) {
      fail(ErrorCode::BadInput, "eigenvalues are not nondecreasing");
    }
  }
}

double Spectrum::lambda(int k) const { return mode(k).lambda; }
double Spectrum::omega(int k) const { return mode(k).omega; }

const EigenMode& Spectrum::mode(int k) const {
  if (k < 1 || k > size()) {
    fail(ErrorCode::IndexOutOfRange,
         "mode index " + std::to_string(k) + " outside 1.." + std::to_string(size()));
  }
  return modes_[k - 1];
}

GraphFunction Spectrum::eigenfunction(int k) const {
  const EigenMode& m = mode(k);
  std::vector<EdgeFunction> edges;
  for (const ClosedForm& f : m.edge_forms) edges.push_back(EdgeFunction::closed(f));
  return GraphFunction(std::move(edges));
}

std::vector<double> Spectrum::lambdas() const { return lambdas(size()); }

std::vector<double> Spectrum::lambdas(int count) const {
  if (count < 1 || count > size()) {
    fail(ErrorCode::InsufficientSpectrum,
         "requested " + std::to_string(count) + " eigenvalues, have " + std::to_string(size()));
  }
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = modes_[i].lambda;
  return out;
}

Spectrum compute_spectrum(const MetricGraph& graph, int K) {
  if (K < 1) fail(ErrorCode::BadInput, "eigenvalue count must be positive");
  switch (graph.kind()) {
    case GraphKind::Star: return Spectrum(graph, solve_star(graph, K));
    case GraphKind::Tadpole: return Spectrum(graph, solve_tadpole(graph, K));
    case GraphKind::Generic:
      fail(ErrorCode::UnsupportedKind,
           "closed-form spectra cover star and tadpole graphs; use the oracle");
  }
  fail(ErrorCode::UnsupportedKind, "unknown graph kind");
}

VertexResidual nk_residual(const Spectrum& spectrum, int k) {
  const EigenMode& m = spectrum.mode(k);
  const MetricGraph& g = spectrum.graph();
  VertexResidual worst;
  for (const Vertex& v : g.vertices()) {
    if (v.condition != VertexCondition::NeumannKirchhoff) continue;
    double vmin = 0, vmax = 0, flux = 0;
    bool first = true;
    for (const EdgeEnd& end : g.ends_at(v.id)) {
      const ClosedForm& f = m.edge_forms[end.edge_index];
      const double L = g.edges()[end.edge_index].length;
      const double x = end.at_zero ? 0 : L;
      const double value = f.eval(x);
      // derivative pointing into the edge, away from the vertex
      flux += end.at_zero ? f.derivative(0) : -f.derivative(L);
      vmin = first ? value : std::min(vmin, value);
      vmax = first ? value : std::max(vmax, value);
      first = false;
    }
    worst.continuity = std::max(worst.continuity, vmax - vmin);
    worst.flux = std::max(worst.flux, std::abs(flux));
  }
  return worst;
}

GapReport gap_report(const Spectrum& spectrum, int block_m) {
  if (block_m < 1) fail(ErrorCode::BadInput, "block size must be positive");
  const int K = spectrum.size();
  if (K < std::max(10, 2 * block_m)) {
    fail(ErrorCode::InsufficientSpectrum,
         "gap report needs at least " + std::to_string(std::max(10, 2 * block_m)) +
             " eigenvalues, have " + std::to_string(K));
  }
  std::vector<double> sq(K);
  for (int k = 1; k <= K; ++k) sq[k - 1] = std::sqrt(std::max(0.0, spectrum.lambda(k)));

  GapReport rep;
  rep.block_m = block_m;
  rep.gamma = std::numeric_limits<double>::infinity();
  for (int k = 0; k + block_m < K; ++k) rep.gamma = std::min(rep.gamma, sq[k + block_m] - sq[k]);

  std::vector<double> gaps(K - 1);
  rep.min_consecutive_gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k + 1 < K; ++k) {
    gaps[k] = sq[k + 1] - sq[k];
    rep.min_consecutive_gap = std::min(rep.min_consecutive_gap, gaps[k]);
  }

  // log-log fit of the consecutive gaps; vanished gaps (multiplicities) are
  // excluded and flagged instead.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int used = 0;
  for (int k = 0; k + 1 < K; ++k) {
    if (gaps[k] <= kOmegaTol * std::max(1.0, sq[k + 1])) {
      rep.weak_gap_degenerate = true;
      continue;
    }
    const double lx = std::log(static_cast<double>(k + 1));
    const double ly = std::log(gaps[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++used;
  }
  if (used >= 3) {
    const double denom = used * sxx - sx * sx;
    const double slope = (used * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / used;
    rep.weak_p = -slope;
    rep.weak_c = std::exp(intercept);
    double ss = 0;
    for (int k = 0; k + 1 < K; ++k) {
      if (gaps[k] <= kOmegaTol * std::max(1.0, sq[k + 1])) continue;
      const double pred = intercept + slope * std::log(static_cast<double>(k + 1));
      const double r = std::log(gaps[k]) - pred;
      ss += r * r;
    }
    rep.weak_residual = std::sqrt(ss / used);
  } else {
    rep.weak_gap_degenerate = true;
  }

  rep.envelope_a.resize(K - 1);
  double running = std::numeric_limits<double>::infinity();
  for (int k = 0; k + 1 < K; ++k) {
    running = std::min(running, gaps[k]);
    rep.envelope_a[k] = running;
  }

  rep.weyl_min = std::numeric_limits<double>::infinity();
  rep.weyl_max = 0;
  for (int k = 2; k <= K; ++k) {
    const double r = spectrum.lambda(k) / (static_cast<double>(k) * k);
    rep.weyl_min = std::min(rep.weyl_min, r);
    rep.weyl_max = std::max(rep.weyl_max, r);
  }

  const double sq1 = sq[0];
  for (int k = 1; k <= std::min(30, K - 1); ++k) {
    const double a = rep.envelope_a[k - 1];
    const double rho = (1 - 1e-6) * a * (a + 2 * sq1);
    if (!(rho > 0)) continue;
    if (spectrum.lambda(K) < spectrum.lambda(k) + rho) continue;
    rep.counting_samples.push_back({k, rho, counting_function(spectrum, k, rho)});
  }
  return rep;
}

int counting_function(const Spectrum& spectrum, int k, double rho) {
  const int K = spectrum.size();
  if (k < 1 || k > K) {
    fail(ErrorCode::IndexOutOfRange, "counting index " + std::to_string(k) + " outside spectrum");
  }
  if (!(rho > 0)) fail(ErrorCode::BadInput, "counting radius must be positive");
  const double lk = spectrum.lambda(k);
  if (spectrum.lambda(K) < lk + rho) {
    fail(ErrorCode::TruncationInsufficient,
         "spectrum truncated below lambda_k + rho = " + std::to_string(lk + rho));
  }
  int count = 0;
  for (int m = 1; m <= K; ++m) {
    const double d = std::abs(spectrum.lambda(m) - lk);
    if (d > 0 && d <= rho) ++count;
  }
  return count;
}

std::vector<double> OracleResult::lambdas() const {
  std::vector<double> out;
  for (const OracleMode& m : modes) out.push_back(m.lambda);
  return out;
}

}  // namespace graphctl
