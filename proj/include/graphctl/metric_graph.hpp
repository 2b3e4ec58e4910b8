#pragma once

#include <string>
#include <variant>
#include <vector>

#include "graphctl/errors.hpp"

namespace graphctl {

enum class VertexCondition { Dirichlet, Neumann, NeumannKirchhoff };
enum class GraphKind { Star, Tadpole, Generic };

struct Edge {
  int id = 0;
  double length = 0;
  int from = 0;  // vertex id at local coordinate x = 0
  int to = 0;    // vertex id at local coordinate x = length
};

struct Vertex {
  int id = 0;
  VertexCondition condition = VertexCondition::Neumann;
};

// One endpoint of an edge as seen from a vertex.
struct EdgeEnd {
  int edge_index = 0;  // index into edges()
  bool at_zero = true; // endpoint at x = 0 (from) or x = length (to)
};

// Immutable compact metric graph: edges with positive lengths, oriented
// endpoints, and a boundary condition per vertex. External vertices (incident
// to exactly one edge endpoint) carry Dirichlet or Neumann; internal vertices
// carry Neumann-Kirchhoff. A loop edge attaches both endpoints to the same
// vertex.
class MetricGraph {
 public:
  MetricGraph(GraphKind kind, std::vector<Edge> edges, std::vector<Vertex> vertices);

  GraphKind kind() const { return kind_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }

  int num_edges() const { return static_cast<int>(edges_.size()); }
  double total_length() const { return total_length_; }
  double min_edge_length() const { return min_length_; }

  const Vertex& vertex(int vertex_id) const;
  bool is_external(int vertex_id) const;
  // both endpoints of a loop count separately
  int degree(int vertex_id) const;
  const std::vector<EdgeEnd>& ends_at(int vertex_id) const;

 private:
  GraphKind kind_;
  std::vector<Edge> edges_;
  std::vector<Vertex> vertices_;
  std::vector<std::vector<EdgeEnd>> ends_;  // per vertex position in vertices_
  double total_length_ = 0;
  double min_length_ = 0;

  int vertex_pos(int vertex_id) const;
};

MetricGraph build_graph(GraphKind kind, std::vector<Edge> edges, std::vector<Vertex> vertices);

// Parse the documented JSON schema:
//   {"kind": "star", "edges": [{"id":1,"length":1.0,"from":0,"to":1}, ...],
//    "vertices": [{"id":0,"condition":"neumann-kirchhoff"}, ...]}
MetricGraph build_graph(const std::string& json_text);
std::string graph_to_json(const MetricGraph& g);

// Convenience builders used throughout the tests and the demo scenarios.
// Stars attach edge tips at x = 0 and the common NK vertex at x = L;
// the tadpole loop has both endpoints at the junction, the tail tip is
// external at x = 0.
MetricGraph make_star(const std::vector<double>& lengths,
                      VertexCondition tips = VertexCondition::Neumann);
MetricGraph make_tadpole(double loop_length, double tail_length);
MetricGraph make_interval(double length,
                          VertexCondition left = VertexCondition::Neumann,
                          VertexCondition right = VertexCondition::Neumann);

// ---------------------------------------------------------------------------
// Functions on graphs

// Closed-form building block on one edge: amp*cos(omega x + phase),
// amp*sin(omega x + phase), amp*x^power, or a constant.
struct ClosedForm {
  enum class Kind { Constant, Cosine, Sine, Monomial };
  Kind kind = Kind::Constant;
  double amp = 0;
  double omega = 0;
  double phase = 0;
  int power = 0;

  static ClosedForm constant(double c) { return {Kind::Constant, c, 0, 0, 0}; }
  static ClosedForm cosine(double amp, double omega, double phase = 0) {
    return {Kind::Cosine, amp, omega, phase, 0};
  }
  static ClosedForm sine(double amp, double omega, double phase = 0) {
    return {Kind::Sine, amp, omega, phase, 0};
  }
  static ClosedForm monomial(double amp, int power) {
    return {Kind::Monomial, amp, 0, 0, power};
  }

  double eval(double x) const;
  double derivative(double x) const;
};

// Exact ∫_0^L f(x) g(x) dx for the closed-form pairs supported here (any two
// trigonometric forms, monomial times trigonometric, monomial times monomial).
double closed_pair_integral(const ClosedForm& f, const ClosedForm& g, double length);

// Default composite-Simpson resolution: 2048 intervals per unit length,
// rounded up to an even count of at least 16.
int default_intervals(double length);

// Composite Simpson over samples on a uniform grid with n = samples.size()-1
// intervals (n must be even).
double simpson(const std::vector<double>& samples, double length);

// Per-edge function: closed form or samples on the uniform default grid.
class EdgeFunction {
 public:
  static EdgeFunction closed(ClosedForm form);
  static EdgeFunction sampled(std::vector<double> samples);
  static EdgeFunction zero();

  bool is_closed() const { return std::holds_alternative<ClosedForm>(rep_); }
  const ClosedForm& form() const { return std::get<ClosedForm>(rep_); }
  const std::vector<double>& samples() const { return std::get<std::vector<double>>(rep_); }

  // value at x for closed forms; sampled representations interpolate linearly
  // (used only for spot checks, never for quadrature)
  double eval(double x, double length) const;

 private:
  std::variant<ClosedForm, std::vector<double>> rep_;
};

// Edge-wise function on a fixed graph. Owns nothing about the graph beyond
// the edge count; all geometric data comes from the MetricGraph passed to the
// operations.
class GraphFunction {
 public:
  GraphFunction() = default;
  explicit GraphFunction(std::vector<EdgeFunction> per_edge) : edges_(std::move(per_edge)) {}

  int num_edges() const { return static_cast<int>(edges_.size()); }
  const EdgeFunction& edge(int e) const { return edges_.at(e); }
  EdgeFunction& edge(int e) { return edges_.at(e); }

  static GraphFunction zeros(int num_edges);

 private:
  std::vector<EdgeFunction> edges_;
};

// Σ_j ∫_0^{L_j} f^j g^j dx.  Closed-form pairs with a known antiderivative are
// integrated exactly; every other combination is sampled on the default grid
// and integrated by composite Simpson. Sampled representations must share the
// default grid (GridMismatch otherwise).
double inner_product(const GraphFunction& f, const GraphFunction& g, const MetricGraph& graph);

double l2_norm(const GraphFunction& f, const MetricGraph& graph);

// Sample a closed-form edge function on the default grid of its edge.
std::vector<double> sample_edge_default(const EdgeFunction& f, double length);

}  // namespace graphctl
