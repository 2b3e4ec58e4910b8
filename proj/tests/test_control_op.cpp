#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "graphctl/control_op.hpp"
#include "graphctl/metric_graph.hpp"
#include "graphctl/spectral.hpp"

using namespace graphctl;

namespace {

constexpr double kPi = 3.14159265358979323846;

// ⟨Bφ₁, φ_k⟩ for the cosine profile on the first arm of the (1, √2, √3)
// Neumann star, frozen from a 50-digit evaluation of the closed form.
const std::vector<double> kStarCouplings{
    0.15354056460622913,
    0.061604666638117306,
    0.26234078576228181,
    0.14516759569399144,
    0.041738668227177672,
    0.033767012536345142,
    0.0039358033940341055,
    -0.011876443896851822,
    -0.0098301075065671061,
    -0.010089280640588310,
    -0.00054683345511160122,
    0.0016799940237140321,
};

// Same for the linear profile μ = x on the loop of the (2, √3) tadpole.
const std::vector<double> kTadpoleCouplings{
    0.53589838486224541,
    0.43361101893166629,
    0.16287746909103716,
    -0.32953864315512307,
    -0.049773447529586355,
    -0.10668539113997812,
    -0.047542979097713242,
    -0.16476932157756154,
    0.046382276186981731,
    0.059816985508693788,
    0.013392545698803450,
    -0.10984621438504102,
};

MetricGraph unequal_star() { return make_star({1.0, std::sqrt(2.0), std::sqrt(3.0)}); }

}  // namespace

TEST_CASE("operator construction validates its profiles") {
  CHECK_THROWS_AS(ControlOperator({}), Error);
  CHECK_THROWS_AS(ControlOperator({EdgeProfile::none(), EdgeProfile::none()}), Error);
  CHECK_THROWS_AS(ControlOperator({EdgeProfile::cosine(std::nan(""))}), Error);
  CHECK_THROWS_AS(ControlOperator({EdgeProfile::monomial(-1)}), Error);
  CHECK_THROWS_AS(ControlOperator({EdgeProfile::sampled({1.0})}), Error);

  const ControlOperator b = ControlOperator::cosine_on_edge(1, 3, 2.0);
  CHECK(b.num_edges() == 3);
  CHECK(b.profile(0).kind == EdgeProfile::Kind::None);
  CHECK(b.profile(1).kind == EdgeProfile::Kind::Cosine);
  CHECK(b.profile_value(1, 0.0, 1.5) == doctest::Approx(2.0));
  CHECK(b.profile_value(1, 1.5, 1.5) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(b.profile_value(0, 0.7, 1.0) == 0.0);

  const ControlOperator s = b.scaled(0.5);
  CHECK(s.profile(1).scale == doctest::Approx(1.0));
}

TEST_CASE("applying the operator multiplies edge-wise") {
  const MetricGraph g = unequal_star();
  const Spectrum spec = compute_spectrum(g, 4);
  const ControlOperator b = ControlOperator::cosine_on_edge(0, 3);

  const GraphFunction image = b.apply(spec.eigenfunction(1), g);
  // constant mode times the half-period cosine stays closed-form
  CHECK(image.edge(0).is_closed());
  const double c = 1.0 / std::sqrt(g.total_length());
  CHECK(image.edge(0).eval(0.25, 1.0) ==
        doctest::Approx(c * std::cos(kPi * 0.25 / 2)).epsilon(1e-13));
  CHECK(image.edge(1).eval(0.5, std::sqrt(2.0)) == 0.0);

  // a trig mode picks up the sampled route and agrees pointwise
  const GraphFunction f2 = spec.eigenfunction(2);
  const GraphFunction image2 = b.apply(f2, g);
  const std::vector<double> samples = sample_edge_default(image2.edge(0), 1.0);
  const int n = static_cast<int>(samples.size()) - 1;
  for (int i : {0, n / 4, n / 2, n}) {
    const double x = 1.0 * i / n;
    CHECK(samples[i] ==
          doctest::Approx(f2.edge(0).eval(x, 1.0) * std::cos(kPi * x / 2)).epsilon(1e-12));
  }

  // sampled input off the default grid is rejected
  GraphFunction bad = GraphFunction::zeros(3);
  bad.edge(0) = EdgeFunction::sampled(std::vector<double>(33, 1.0));
  CHECK_THROWS_AS(b.apply(bad, g), Error);
}

TEST_CASE("star couplings match the frozen closed-form values") {
  const Spectrum spec = compute_spectrum(unequal_star(), 12);
  const ControlOperator b = ControlOperator::cosine_on_edge(0, 3);
  for (int k = 1; k <= 12; ++k) {
    CHECK(coupling(b, spec, 1, k) ==
          doctest::Approx(kStarCouplings[k - 1]).epsilon(1e-10));
  }
  // diagonal value in closed form: 2L₁/(π ΣL)
  const double total = 1.0 + std::sqrt(2.0) + std::sqrt(3.0);
  CHECK(coupling(b, spec, 1, 1) == doctest::Approx(2.0 / (kPi * total)).epsilon(1e-13));
}

TEST_CASE("tadpole couplings match the frozen values") {
  const Spectrum spec = compute_spectrum(make_tadpole(2.0, std::sqrt(3.0)), 12);
  const ControlOperator b = ControlOperator::monomial_on_edge(0, 2, 1);
  for (int k = 1; k <= 12; ++k) {
    CHECK(coupling(b, spec, 1, k) ==
          doctest::Approx(kTadpoleCouplings[k - 1]).epsilon(1e-9));
  }
  // first coupling in closed form: L₁²/(2 ΣL)
  CHECK(coupling(b, spec, 1, 1) ==
        doctest::Approx(4.0 / (2.0 * (2.0 + std::sqrt(3.0)))).epsilon(1e-12));
}

TEST_CASE("closed-form and quadrature coupling routes agree") {
  const Spectrum star = compute_spectrum(unequal_star(), 12);
  const ControlOperator bs = ControlOperator::cosine_on_edge(0, 3);
  for (int k = 1; k <= 12; ++k) {
    for (int j : {1, 2}) {
      CHECK(coupling(bs, star, j, k) ==
            doctest::Approx(coupling_quadrature(bs, star, j, k)).epsilon(1e-9));
    }
  }
  const Spectrum tad = compute_spectrum(make_tadpole(2.0, std::sqrt(3.0)), 12);
  const ControlOperator bt = ControlOperator::monomial_on_edge(0, 2, 1);
  for (int k = 1; k <= 12; ++k) {
    CHECK(coupling(bt, tad, 1, k) ==
          doctest::Approx(coupling_quadrature(bt, tad, 1, k)).epsilon(1e-9));
  }
}

TEST_CASE("a sampled profile reproduces its closed-form counterpart") {
  const MetricGraph g = unequal_star();
  const Spectrum spec = compute_spectrum(g, 8);
  // tabulate x² on the default grid of edge 0
  const int n = default_intervals(1.0);
  std::vector<double> values(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double x = 1.0 * i / n;
    values[i] = x * x;
  }
  const ControlOperator sampled(
      {EdgeProfile::sampled(values), EdgeProfile::none(), EdgeProfile::none()});
  const ControlOperator closed = ControlOperator::monomial_on_edge(0, 3, 2);
  for (int k = 1; k <= 8; ++k) {
    CHECK(coupling(sampled, spec, 1, k) ==
          doctest::Approx(coupling(closed, spec, 1, k)).epsilon(1e-10));
  }
}

TEST_CASE("coupling matrix is symmetric and bounds checked") {
  const Spectrum spec = compute_spectrum(unequal_star(), 8);
  const ControlOperator b = ControlOperator::cosine_on_edge(0, 3);
  const Eigen::MatrixXd m = coupling_matrix(b, spec, 8);
  REQUIRE(m.rows() == 8);
  REQUIRE(m.cols() == 8);
  CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);  // mirrored exactly
  for (int k = 1; k <= 8; ++k) {
    CHECK(m(0, k - 1) == doctest::Approx(coupling(b, spec, 1, k)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(coupling_matrix(b, spec, 9), Error);
  CHECK_THROWS_AS(coupling(b, spec, 0, 1), Error);
  CHECK_THROWS_AS(coupling(b, spec, 1, 9), Error);
}

TEST_CASE("spreading verification accepts the demo multipliers") {
  const Spectrum star = compute_spectrum(unequal_star(), 30);
  const SpreadingReport srep =
      verify_spreading(ControlOperator::cosine_on_edge(0, 3), star, 1, 30);
  CHECK(srep.pass);
  CHECK(srep.modes == 30);
  CHECK(srep.q <= 2.5);
  CHECK(srep.b > 0);
  CHECK(srep.floor_failures.empty());
  CHECK(srep.first_coupling == doctest::Approx(kStarCouplings[0]).epsilon(1e-10));
  REQUIRE(static_cast<int>(srep.couplings.size()) == 30);
  for (int k = 1; k <= 12; ++k) {
    CHECK(srep.couplings[k - 1] == doctest::Approx(kStarCouplings[k - 1]).epsilon(1e-10));
  }

  const Spectrum tad = compute_spectrum(make_tadpole(2.0, std::sqrt(3.0)), 30);
  const SpreadingReport trep =
      verify_spreading(ControlOperator::monomial_on_edge(0, 2, 1), tad, 1, 30);
  CHECK(trep.pass);
  CHECK(trep.q <= 2.0);
}

TEST_CASE("spreading verification rejects malformed requests") {
  const Spectrum spec = compute_spectrum(unequal_star(), 12);
  const ControlOperator b = ControlOperator::cosine_on_edge(0, 3);
  CHECK_THROWS_AS(verify_spreading(b, spec, 1, 8), Error);   // too few modes
  CHECK_THROWS_AS(verify_spreading(b, spec, 13, 12), Error);  // j outside range
  try {
    verify_spreading(b, spec, 0, 12);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndexOutOfRange);
  }
}
