#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "graphctl/filtering.hpp"

using namespace graphctl;

namespace {

constexpr double kPi = 3.14159265358979323846;

MetricGraph demo_star4() {
  return make_star({1.0, 1.0, 1.0, std::sqrt(2.0)}, VertexCondition::Dirichlet);
}

// x² on the two active arms, nothing on the spectators
ControlOperator pair_multiplier() {
  return ControlOperator({EdgeProfile::monomial(2), EdgeProfile::monomial(2),
                          EdgeProfile::none(), EdgeProfile::none()});
}

}  // namespace

TEST_CASE("subspace construction validates the geometry") {
  CHECK_THROWS_AS(build_invariant_subspace(demo_star4(), 0), Error);

  try {
    build_invariant_subspace(make_star({1.0, 1.0, 1.0}, VertexCondition::Dirichlet), 4);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedKind);
  }
  try {
    build_invariant_subspace(make_star({1.0, 1.0, 1.5, std::sqrt(2.0)},
                                       VertexCondition::Dirichlet),
                             4);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnequalLengths);
  }
  try {
    build_invariant_subspace(make_star({1.0, 1.0, 1.0, std::sqrt(2.0)}), 4);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedKind);  // Neumann tips
  }

  const InvariantSubspace sub = build_invariant_subspace(demo_star4(), 6);
  CHECK(sub.modes() == 6);
  CHECK(sub.tail_length() == doctest::Approx(std::sqrt(2.0)));
  for (int k = 1; k <= 6; ++k) {
    CHECK(sub.reduced_lambdas()[k - 1] == doctest::Approx(k * k * kPi * kPi).epsilon(1e-14));
  }
}

TEST_CASE("generators are unit-norm antisymmetric eigenfunctions") {
  const MetricGraph g = demo_star4();
  const InvariantSubspace sub = build_invariant_subspace(g, 5);
  for (int k = 1; k <= 5; ++k) {
    const GraphFunction f = sub.generator(k);
    CHECK(l2_norm(f, g) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.edge(0).eval(0.25, 1.0) == doctest::Approx(std::sin(k * kPi * 0.25)).epsilon(1e-14));
    CHECK(f.edge(1).eval(0.25, 1.0) ==
          doctest::Approx(-std::sin(k * kPi * 0.25)).epsilon(1e-14));
    CHECK(f.edge(2).eval(0.5, 1.0) == 0.0);
    CHECK(f.edge(3).eval(0.5, std::sqrt(2.0)) == 0.0);
  }
  CHECK_THROWS_AS(sub.generator(0), Error);
  CHECK_THROWS_AS(sub.generator(6), Error);
}

TEST_CASE("pattern projection fixes the subspace and kills its complement") {
  const MetricGraph g = demo_star4();
  const InvariantSubspace sub = build_invariant_subspace(g, 3);

  // P(f_k) = f_k sample for sample
  const GraphFunction f = sub.generator(2);
  const GraphFunction pf = pattern_project(f, g);
  const std::vector<double> want = sample_edge_default(f.edge(0), 1.0);
  const std::vector<double> got = sample_edge_default(pf.edge(0), 1.0);
  REQUIRE(want.size() == got.size());
  double diff = 0;
  for (size_t i = 0; i < want.size(); ++i) diff = std::max(diff, std::abs(want[i] - got[i]));
  CHECK(diff == 0.0);

  // symmetric data projects to zero
  GraphFunction sym = GraphFunction::zeros(4);
  sym.edge(0) = EdgeFunction::closed(ClosedForm::sine(1.0, kPi, 0.0));
  sym.edge(1) = EdgeFunction::closed(ClosedForm::sine(1.0, kPi, 0.0));
  const GraphFunction psym = pattern_project(sym, g);
  CHECK(l2_norm(psym, g) == 0.0);

  // idempotence on a state with no symmetry at all
  GraphFunction mixed = GraphFunction::zeros(4);
  mixed.edge(0) = EdgeFunction::closed(ClosedForm::sine(1.0, kPi, 0.0));
  const GraphFunction p1 = pattern_project(mixed, g);
  const GraphFunction p2 = pattern_project(p1, g);
  const std::vector<double> a = sample_edge_default(p1.edge(0), 1.0);
  const std::vector<double> b = sample_edge_default(p2.edge(0), 1.0);
  diff = 0;
  for (size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
  CHECK(diff == 0.0);

  CHECK_THROWS_AS(pattern_project(GraphFunction::zeros(3), g), Error);
}

TEST_CASE("identical active-arm profiles leave the subspace invariant") {
  const InvariantSubspace sub = build_invariant_subspace(demo_star4(), 8);
  const InvarianceReport rep = check_B_invariance(pair_multiplier(), sub, 20);
  CHECK(rep.trials == 20);
  CHECK(rep.pass);
  // the antisymmetry cancels bit for bit, so the leakage is exactly zero
  CHECK(rep.worst_residual == 0.0);

  CHECK_THROWS_AS(check_B_invariance(pair_multiplier(), sub, 0), Error);
}

TEST_CASE("a one-armed multiplier leaks and is rejected") {
  const InvariantSubspace sub = build_invariant_subspace(demo_star4(), 8);
  const ControlOperator lopsided = ControlOperator::cosine_on_edge(0, 4);

  const InvarianceReport rep = check_B_invariance(lopsided, sub, 8);
  CHECK_FALSE(rep.pass);
  CHECK(rep.worst_residual > 0.1);  // half of Bψ lands in the symmetric part

  try {
    reduce_to_interval(lopsided, sub, 8);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadInput);  // profiles differ between the arms
  }
}

TEST_CASE("reduction lands on the Dirichlet interval with the shared profile") {
  const InvariantSubspace sub = build_invariant_subspace(demo_star4(), 8);
  const ReducedProblem rp = reduce_to_interval(pair_multiplier(), sub, 8);

  CHECK(rp.interval.num_edges() == 1);
  CHECK(rp.interval.edges()[0].length == 1.0);
  for (const auto& v : rp.interval.vertices()) {
    CHECK(v.condition == VertexCondition::Dirichlet);
  }

  REQUIRE(rp.spectrum.size() == 8);
  for (int k = 1; k <= 8; ++k) {
    CHECK(rp.spectrum.lambda(k) == doctest::Approx(k * k * kPi * kPi).epsilon(1e-14));
    const ClosedForm& form = rp.spectrum.mode(k).edge_forms.at(0);
    CHECK(form.kind == ClosedForm::Kind::Sine);
    CHECK(form.amp == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(form.omega == doctest::Approx(k * kPi).epsilon(1e-15));
  }

  CHECK(rp.multiplier.num_edges() == 1);
  CHECK(rp.multiplier.profile(0).kind == EdgeProfile::Kind::Monomial);
  CHECK(rp.multiplier.profile(0).power == 2);

  // couplings of the reduced problem in closed form:
  // b̃₁ = 1/3 - 1/(2π²), b̃_k = 8k(-1)^{k-1} / (π²(k²-1)²) for k ≥ 2
  CHECK(coupling(rp.multiplier, rp.spectrum, 1, 1) ==
        doctest::Approx(1.0 / 3.0 - 1.0 / (2.0 * kPi * kPi)).epsilon(1e-9));
  for (int k = 2; k <= 8; ++k) {
    const double denom = kPi * kPi * (k * k - 1.0) * (k * k - 1.0);
    const double want = 8.0 * k * (k % 2 == 1 ? 1.0 : -1.0) / denom;
    CHECK(coupling(rp.multiplier, rp.spectrum, 1, k) == doctest::Approx(want).epsilon(1e-9));
  }

  CHECK_THROWS_AS(reduce_to_interval(pair_multiplier(), sub, 0), Error);
  CHECK_THROWS_AS(reduce_to_interval(ControlOperator::monomial_on_edge(0, 3, 2), sub, 4),
                  Error);
}
