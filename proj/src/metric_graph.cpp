#include "graphctl/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace graphctl {

namespace {

const char* condition_name(VertexCondition c) {
  switch (c) {
    case VertexCondition::Dirichlet: return "dirichlet";
    case VertexCondition::Neumann: return "neumann";
    case VertexCondition::NeumannKirchhoff: return "neumann-kirchhoff";
  }
  return "?";
}

VertexCondition parse_condition(const std::string& s) {
  if (s == "dirichlet") return VertexCondition::Dirichlet;
  if (s == "neumann") return VertexCondition::Neumann;
  if (s == "neumann-kirchhoff" || s == "kirchhoff") return VertexCondition::NeumannKirchhoff;
  fail(ErrorCode::BadInput, "unknown vertex condition '" + s + "'");
}

const char* kind_name(GraphKind k) {
  switch (k) {
    case GraphKind::Star: return "star";
    case GraphKind::Tadpole: return "tadpole";
    case GraphKind::Generic: return "generic";
  }
  return "?";
}

GraphKind parse_kind(const std::string& s) {
  if (s == "star") return GraphKind::Star;
  if (s == "tadpole") return GraphKind::Tadpole;
  if (s == "generic" || s == "interval") return GraphKind::Generic;
  fail(ErrorCode::BadInput, "unknown graph kind '" + s + "'");
}

}  // namespace

MetricGraph::MetricGraph(GraphKind kind, std::vector<Edge> edges, std::vector<Vertex> vertices)
    : kind_(kind), edges_(std::move(edges)), vertices_(std::move(vertices)) {
  if (edges_.empty()) fail(ErrorCode::BadInput, "graph has no edges");
  if (vertices_.empty()) fail(ErrorCode::BadInput, "graph has no vertices");

  min_length_ = std::numeric_limits<double>::infinity();
  for (const Edge& e : edges_) {
    if (!(e.length > 0) || !std::isfinite(e.length)) {
      fail(ErrorCode::NonPositiveLength,
           "edge " + std::to_string(e.id) + " has length " + std::to_string(e.length));
    }
    total_length_ += e.length;
    min_length_ = std::min(min_length_, e.length);
  }

  // Build the endpoint table; unknown vertex references are input errors.
  ends_.assign(vertices_.size(), {});
  for (int ei = 0; ei < static_cast<int>(edges_.size()); ++ei) {
    const Edge& e = edges_[ei];
    ends_[vertex_pos(e.from)].push_back({ei, true});
    ends_[vertex_pos(e.to)].push_back({ei, false});
  }

  // Condition placement: degree-1 vertices need Dirichlet or Neumann,
  // higher-degree vertices need Neumann-Kirchhoff.
  for (size_t vi = 0; vi < vertices_.size(); ++vi) {
    const Vertex& v = vertices_[vi];
    const size_t deg = ends_[vi].size();
    if (deg == 0) {
      fail(ErrorCode::DisconnectedGraph, "vertex " + std::to_string(v.id) + " touches no edge");
    }
    const bool external = (deg == 1);
    if (external && v.condition == VertexCondition::NeumannKirchhoff) {
      fail(ErrorCode::IllegalConditionPlacement,
           "external vertex " + std::to_string(v.id) + " cannot carry neumann-kirchhoff");
    }
    if (!external && v.condition != VertexCondition::NeumannKirchhoff) {
      fail(ErrorCode::IllegalConditionPlacement,
           "internal vertex " + std::to_string(v.id) + " must carry neumann-kirchhoff");
    }
  }

  // Connectivity sweep over vertices through shared edges.
  std::vector<char> seen(vertices_.size(), 0);
  std::vector<size_t> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const size_t vi = stack.back();
    stack.pop_back();
    for (const EdgeEnd& end : ends_[vi]) {
      const Edge& e = edges_[end.edge_index];
      for (int other_id : {e.from, e.to}) {
        const size_t oi = static_cast<size_t>(vertex_pos(other_id));
        if (!seen[oi]) {
          seen[oi] = 1;
          stack.push_back(oi);
        }
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    fail(ErrorCode::DisconnectedGraph, "graph is not connected");
  }
}

int MetricGraph::vertex_pos(int vertex_id) const {
  for (size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i].id == vertex_id) return static_cast<int>(i);
  }
  fail(ErrorCode::BadInput, "unknown vertex id " + std::to_string(vertex_id));
}

const Vertex& MetricGraph::vertex(int vertex_id) const { return vertices_[vertex_pos(vertex_id)]; }

bool MetricGraph::is_external(int vertex_id) const { return degree(vertex_id) == 1; }

int MetricGraph::degree(int vertex_id) const {
  return static_cast<int>(ends_[vertex_pos(vertex_id)].size());
}

const std::vector<EdgeEnd>& MetricGraph::ends_at(int vertex_id) const {
  return ends_[vertex_pos(vertex_id)];
}

MetricGraph build_graph(GraphKind kind, std::vector<Edge> edges, std::vector<Vertex> vertices) {
  return MetricGraph(kind, std::move(edges), std::move(vertices));
}

MetricGraph build_graph(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& err) {
    fail(ErrorCode::BadInput, std::string("graph spec is not valid JSON: ") + err.what());
  }
  try {
    const GraphKind kind = parse_kind(doc.at("kind").get<std::string>());
    std::vector<Edge> edges;
    for (const auto& je : doc.at("edges")) {
      Edge e;
      e.id = je.at("id").get<int>();
      e.length = je.at("length").get<double>();
      e.from = je.at("from").get<int>();
      e.to = je.at("to").get<int>();
      edges.push_back(e);
    }
    std::vector<Vertex> vertices;
    for (const auto& jv : doc.at("vertices")) {
      Vertex v;
      v.id = jv.at("id").get<int>();
      v.condition = parse_condition(jv.at("condition").get<std::string>());
      vertices.push_back(v);
    }
    return MetricGraph(kind, std::move(edges), std::move(vertices));
  } catch (const nlohmann::json::exception& err) {
    fail(ErrorCode::BadInput, std::string("graph spec is missing a field: ") + err.what());
  }
}

std::string graph_to_json(const MetricGraph& g) {
  nlohmann::json doc;
  doc["kind"] = kind_name(g.kind());
  doc["edges"] = nlohmann::json::array();
  for (const Edge& e : g.edges()) {
    doc["edges"].push_back({{"id", e.id}, {"length", e.length}, {"from", e.from}, {"to", e.to}});
  }
  doc["vertices"] = nlohmann::json::array();
  for (const Vertex& v : g.vertices()) {
    doc["vertices"].push_back({{"id", v.id}, {"condition", condition_name(v.condition)}});
  }
  return doc.dump(2);
}

MetricGraph make_star(const std::vector<double>& lengths, VertexCondition tips) {
  if (lengths.size() < 2) fail(ErrorCode::BadInput, "a star needs at least two edges");
  std::vector<Edge> edges;
  std::vector<Vertex> vertices;
  vertices.push_back({0, VertexCondition::NeumannKirchhoff});
  for (size_t i = 0; i < lengths.size(); ++i) {
    const int tip = static_cast<int>(i) + 1;
    edges.push_back({tip, lengths[i], tip, 0});
    vertices.push_back({tip, tips});
  }
  return MetricGraph(GraphKind::Star, std::move(edges), std::move(vertices));
}

MetricGraph make_tadpole(double loop_length, double tail_length) {
  std::vector<Edge> edges{{1, loop_length, 0, 0}, {2, tail_length, 1, 0}};
  std::vector<Vertex> vertices{{0, VertexCondition::NeumannKirchhoff},
                               {1, VertexCondition::Neumann}};
  return MetricGraph(GraphKind::Tadpole, std::move(edges), std::move(vertices));
}

MetricGraph make_interval(double length, VertexCondition left, VertexCondition right) {
  std::vector<Edge> edges{{1, length, 0, 1}};
  std::vector<Vertex> vertices{{0, left}, {1, right}};
  return MetricGraph(GraphKind::Generic, std::move(edges), std::move(vertices));
}

// ---------------------------------------------------------------------------
// Closed forms and quadrature

double ClosedForm::eval(double x) const {
  switch (kind) {
    case Kind::Constant: return amp;
    case Kind::Cosine: return amp * std::cos(omega * x + phase);
    case Kind::Sine: return amp * std::sin(omega * x + phase);
    case Kind::Monomial: return amp * std::pow(x, power);
  }
  return 0;
}

double ClosedForm::derivative(double x) const {
  switch (kind) {
    case Kind::Constant: return 0;
    case Kind::Cosine: return -amp * omega * std::sin(omega * x + phase);
    case Kind::Sine: return amp * omega * std::cos(omega * x + phase);
    case Kind::Monomial:
      if (power == 0) return 0;
      return amp * power * std::pow(x, power - 1);
  }
  return 0;
}

namespace {

// ∫_0^L cos(a x + b) dx
double cos_integral(double a, double b, double L) {
  if (a == 0) return L * std::cos(b);
  return (std::sin(a * L + b) - std::sin(b)) / a;
}

// ∫_0^L x^p cos(a x + b) dx by integration by parts; sin enters through a
// phase shift of -pi/2.
double mono_cos_integral(int p, double a, double b, double L) {
  if (p == 0) return cos_integral(a, b, L);
  if (a == 0) return std::cos(b) * std::pow(L, p + 1) / (p + 1);
  const double boundary = std::pow(L, p) * std::sin(a * L + b) / a;
  return boundary - (p / a) * mono_cos_integral(p - 1, a, b - std::numbers::pi / 2, L);
}

// Canonical reduction: every trigonometric/constant form becomes a cosine.
ClosedForm as_cosine(const ClosedForm& f) {
  switch (f.kind) {
    case ClosedForm::Kind::Constant: return ClosedForm::cosine(f.amp, 0, 0);
    case ClosedForm::Kind::Cosine: return f;
    case ClosedForm::Kind::Sine:
      return ClosedForm::cosine(f.amp, f.omega, f.phase - std::numbers::pi / 2);
    case ClosedForm::Kind::Monomial: break;
  }
  fail(ErrorCode::BadInput, "monomial has no cosine form");
}

}  // namespace

double closed_pair_integral(const ClosedForm& f, const ClosedForm& g, double length) {
  const bool f_mono = f.kind == ClosedForm::Kind::Monomial;
  const bool g_mono = g.kind == ClosedForm::Kind::Monomial;
  if (f_mono && g_mono) {
    const int p = f.power + g.power;
    return f.amp * g.amp * std::pow(length, p + 1) / (p + 1);
  }
  if (f_mono || g_mono) {
    const ClosedForm& mono = f_mono ? f : g;
    const ClosedForm trig = as_cosine(f_mono ? g : f);
    return mono.amp * trig.amp *
           mono_cos_integral(mono.power, trig.omega, trig.phase, length);
  }
  // product-to-sum: cos(u) cos(v) = (cos(u-v) + cos(u+v)) / 2
  const ClosedForm cf = as_cosine(f);
  const ClosedForm cg = as_cosine(g);
  const double half = cf.amp * cg.amp / 2;
  return half * (cos_integral(cf.omega - cg.omega, cf.phase - cg.phase, length) +
                 cos_integral(cf.omega + cg.omega, cf.phase + cg.phase, length));
}

int default_intervals(double length) {
  long n = std::lround(std::ceil(2048.0 * length));
  if (n < 16) n = 16;
  if (n % 2 != 0) ++n;
  return static_cast<int>(n);
}

double simpson(const std::vector<double>& samples, double length) {
  const int n = static_cast<int>(samples.size()) - 1;
  if (n < 2 || n % 2 != 0) {
    fail(ErrorCode::GridMismatch,
         "composite Simpson needs an even interval count, got " + std::to_string(n));
  }
  const double h = length / n;
  double odd = 0, even = 0;
  for (int i = 1; i < n; i += 2) odd += samples[i];
  for (int i = 2; i < n; i += 2) even += samples[i];
  return h / 3 * (samples.front() + samples.back() + 4 * odd + 2 * even);
}

EdgeFunction EdgeFunction::closed(ClosedForm form) {
  EdgeFunction f;
  f.rep_ = form;
  return f;
}

EdgeFunction EdgeFunction::sampled(std::vector<double> samples) {
  EdgeFunction f;
  f.rep_ = std::move(samples);
  return f;
}

EdgeFunction EdgeFunction::zero() { return closed(ClosedForm::constant(0)); }

double EdgeFunction::eval(double x, double length) const {
  if (is_closed()) return form().eval(x);
  const auto& s = samples();
  const int n = static_cast<int>(s.size()) - 1;
  const double t = std::clamp(x / length, 0.0, 1.0) * n;
  const int i = std::min(static_cast<int>(t), n - 1);
  const double w = t - i;
  return (1 - w) * s[i] + w * s[i + 1];
}

GraphFunction GraphFunction::zeros(int num_edges) {
  return GraphFunction(std::vector<EdgeFunction>(num_edges, EdgeFunction::zero()));
}

std::vector<double> sample_edge_default(const EdgeFunction& f, double length) {
  if (!f.is_closed()) return f.samples();
  const int n = default_intervals(length);
  std::vector<double> out(n + 1);
  for (int i = 0; i <= n; ++i) out[i] = f.form().eval(length * i / n);
  return out;
}

double inner_product(const GraphFunction& f, const GraphFunction& g, const MetricGraph& graph) {
  if (f.num_edges() != graph.num_edges() || g.num_edges() != graph.num_edges()) {
    fail(ErrorCode::GridMismatch, "function edge count does not match the graph");
  }
  double total = 0;
  for (int e = 0; e < graph.num_edges(); ++e) {
    const double L = graph.edges()[e].length;
    const EdgeFunction& fe = f.edge(e);
    const EdgeFunction& ge = g.edge(e);
    if (fe.is_closed() && ge.is_closed()) {
      total += closed_pair_integral(fe.form(), ge.form(), L);
      continue;
    }
    const std::vector<double> fs = sample_edge_default(fe, L);
    const std::vector<double> gs = sample_edge_default(ge, L);
    if (fs.size() != gs.size() || static_cast<int>(fs.size()) != default_intervals(L) + 1) {
      fail(ErrorCode::GridMismatch,
           "sampled edge " + std::to_string(e) + " is not on the default grid");
    }
    std::vector<double> prod(fs.size());
    for (size_t i = 0; i < fs.size(); ++i) prod[i] = fs[i] * gs[i];
    total += simpson(prod, L);
  }
  return total;
}

double l2_norm(const GraphFunction& f, const MetricGraph& graph) {
  return std::sqrt(std::max(0.0, inner_product(f, f, graph)));
}

}  // namespace graphctl
