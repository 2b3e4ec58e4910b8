#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "graphctl/spectral.hpp"

using namespace graphctl;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Reference eigenvalues computed independently with a 50-digit bracketing
// solver on the secular equations; frozen here to double precision.
const std::vector<double> kStarLambdas{
    0.0,
    0.97404084418468529,
    1.7804921394244399,
    5.2212206481562597,
    9.0286998974172314,
    14.657114243993924,
    21.146941473320106,
    27.438164360779460,
    36.233904090622595,
    46.784101871419944,
    60.941540935011039,
    65.218732354504385,
};

const std::vector<double> kTadpoleLambdas{
    0.0,
    1.1308752673591857,
    5.8639947179531298,
    9.8696044010893586,
    11.378276111519957,
    20.926005244989083,
    34.371044641885588,
    39.478417604357434,
    45.955515004310460,
    65.485439950460107,
    85.697109266052083,
    88.826439609804228,
};

// 1-based positions of the skew (loop-only) modes in the list above.
const std::vector<int> kTadpoleSkew{4, 8, 12};

const std::vector<double> kStar4Lambdas{
    2.0094452530762643,
    5.8675082701900598,
    9.8696044010893586,
    9.8696044010893586,
    16.962654908256605,
    25.178880059254974,
    39.478417604357434,
    39.478417604357434,
    43.427315777144143,
    61.287962137753152,
    80.881493062558561,
    88.826439609804228,
    88.826439609804228,
    112.68902186764487,
};

const std::vector<double> kTadpoleBlockGaps{
    0.044289771958373231,
    0.91636733648050629,
    2.1278537533325155,
    3.1415926535897932,
};

MetricGraph unequal_star() { return make_star({1.0, std::sqrt(2.0), std::sqrt(3.0)}); }

}  // namespace

TEST_CASE("unequal Neumann star matches the frozen secular roots") {
  const Spectrum spec = compute_spectrum(unequal_star(), 12);
  REQUIRE(spec.size() == 12);
  for (int k = 1; k <= 12; ++k) {
    const double want = kStarLambdas[k - 1];
    CHECK(spec.lambda(k) == doctest::Approx(want).epsilon(1e-12));
    CHECK(spec.omega(k) == doctest::Approx(std::sqrt(want)).epsilon(1e-12));
    CHECK_FALSE(spec.mode(k).multiple);  // incommensurate lengths: simple
  }
  CHECK(spec.lambda(1) == 0.0);
  // constant mode normalized over the total length
  const GraphFunction f1 = spec.eigenfunction(1);
  const MetricGraph g = unequal_star();
  CHECK(f1.edge(0).form().eval(0.3) ==
        doctest::Approx(1.0 / std::sqrt(g.total_length())).epsilon(1e-14));
}

TEST_CASE("equal star carries the merged closed-form family with flags") {
  const Spectrum spec = compute_spectrum(make_star({1.0, 1.0, 1.0}), 20);
  int idx = 1;
  for (int j = 0; idx <= 20; ++j) {
    const double lam = 0.25 * j * j * kPi * kPi;
    const int mult = (j % 2 == 1) ? 2 : 1;
    for (int c = 0; c < mult && idx <= 20; ++c, ++idx) {
      CHECK(std::abs(spec.lambda(idx) - lam) <= 1e-10 * std::max(1.0, lam));
      CHECK(spec.mode(idx).multiplicity == mult);
      CHECK(spec.mode(idx).multiple == (mult == 2));
    }
  }
}

TEST_CASE("equal Dirichlet star has cotangent roots in every gap") {
  const Spectrum spec = compute_spectrum(make_star({1.0, 1.0, 1.0}, VertexCondition::Dirichlet), 9);
  // merged family: (2j-1)²π²/4 simple, j²π² double — and no zero mode
  const std::vector<double> want{kPi * kPi / 4, kPi * kPi,     kPi * kPi,
                                 9 * kPi * kPi / 4, 4 * kPi * kPi, 4 * kPi * kPi,
                                 25 * kPi * kPi / 4, 9 * kPi * kPi, 9 * kPi * kPi};
  for (int k = 1; k <= 9; ++k) {
    CHECK(spec.lambda(k) == doctest::Approx(want[k - 1]).epsilon(1e-10));
  }
  CHECK(spec.lambda(1) > 0);
  CHECK(spec.mode(2).multiplicity == 2);
  CHECK(spec.mode(4).multiplicity == 1);
}

TEST_CASE("four-edge Dirichlet star matches the frozen spectrum") {
  const MetricGraph g = make_star({1.0, 1.0, 1.0, std::sqrt(2.0)}, VertexCondition::Dirichlet);
  const Spectrum spec = compute_spectrum(g, 14);
  for (int k = 1; k <= 14; ++k) {
    CHECK(spec.lambda(k) == doctest::Approx(kStar4Lambdas[k - 1]).epsilon(1e-10));
  }
  // the degenerate pairs at (kπ)² keep the antisymmetric member first
  CHECK(spec.mode(3).multiple);
  CHECK(spec.mode(4).multiple);
  const EigenMode& anti = spec.mode(3);
  CHECK(anti.edge_forms[0].amp == doctest::Approx(1.0));
  CHECK(anti.edge_forms[1].amp == doctest::Approx(-1.0));
  CHECK(std::abs(anti.edge_forms[2].amp) < 1e-14);
  CHECK(std::abs(anti.edge_forms[3].amp) < 1e-14);
}

TEST_CASE("tadpole spectrum interleaves symmetric and skew families") {
  const Spectrum spec = compute_spectrum(make_tadpole(2.0, std::sqrt(3.0)), 12);
  for (int k = 1; k <= 12; ++k) {
    CHECK(spec.lambda(k) == doctest::Approx(kTadpoleLambdas[k - 1]).epsilon(1e-12));
    const bool skew =
        std::find(kTadpoleSkew.begin(), kTadpoleSkew.end(), k) != kTadpoleSkew.end();
    CHECK(spec.mode(k).symmetry == (skew ? ModeSymmetry::Skew : ModeSymmetry::Symmetric));
  }
  // skew modes live on the loop alone: sin(2kπx/L₁) with zero tail
  const EigenMode& m4 = spec.mode(4);
  CHECK(m4.edge_forms[0].kind == ClosedForm::Kind::Sine);
  CHECK(m4.edge_forms[0].amp == doctest::Approx(1.0));  // √(2/L₁) with L₁ = 2
  CHECK(m4.edge_forms[0].omega == doctest::Approx(kPi));
  CHECK(m4.edge_forms[1].eval(0.5) == 0.0);
}

TEST_CASE("eigenfunctions are normalized and satisfy the vertex conditions") {
  for (const MetricGraph& g :
       {unequal_star(), make_tadpole(2.0, std::sqrt(3.0)),
        make_star({1.0, 1.0, 1.0, std::sqrt(2.0)}, VertexCondition::Dirichlet)}) {
    const Spectrum spec = compute_spectrum(g, 12);
    for (int k = 1; k <= 12; ++k) {
      CHECK(l2_norm(spec.eigenfunction(k), g) == doctest::Approx(1.0).epsilon(1e-10));
      const VertexResidual res = nk_residual(spec, k);
      CHECK(res.continuity < 1e-9);
      CHECK(res.flux < 1e-8);
    }
  }
}

TEST_CASE("secular values change sign across a root and blow up at poles") {
  const std::vector<double> lengths{1.0, std::sqrt(2.0), std::sqrt(3.0)};
  const double root = std::sqrt(kStarLambdas[1]);
  CHECK(secular_value(SecularKind::Star, root - 1e-3, lengths) *
            secular_value(SecularKind::Star, root + 1e-3, lengths) <
        0);
  CHECK_THROWS_AS(secular_value(SecularKind::Star, kPi / 2, {1.0, 1.0, 1.0}), Error);
}

TEST_CASE("unsupported topologies are rejected") {
  const MetricGraph interval = make_interval(1.0);
  CHECK_THROWS_AS(compute_spectrum(interval, 5), Error);
  try {
    compute_spectrum(interval, 5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedKind);
  }

  // loop and tail poles coincide: the symmetric secular roots cannot be
  // isolated between poles
  try {
    compute_spectrum(make_tadpole(2.0, 1.0), 8);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RootIsolationFailure);
  }
}

TEST_CASE("spectrum accessors are bounds checked") {
  const Spectrum spec = compute_spectrum(unequal_star(), 5);
  CHECK_THROWS_AS(spec.lambda(0), Error);
  CHECK_THROWS_AS(spec.lambda(6), Error);
  CHECK(spec.lambdas(3).size() == 3);
  CHECK_THROWS_AS(spec.lambdas(9), Error);
}

TEST_CASE("discretization oracle converges at second order") {
  const MetricGraph g = unequal_star();
  const Spectrum spec = compute_spectrum(g, 6);
  const OracleResult coarse = discretize_oracle(g, 4e-3, 6);
  const OracleResult fine = discretize_oracle(g, 2e-3, 6);
  double err_c = 0, err_f = 0;
  for (int k = 1; k <= 6; ++k) {
    const double denom = std::max(1.0, spec.lambda(k));
    err_c = std::max(err_c, std::abs(coarse.modes[k - 1].lambda - spec.lambda(k)) / denom);
    err_f = std::max(err_f, std::abs(fine.modes[k - 1].lambda - spec.lambda(k)) / denom);
  }
  CHECK(err_c < 2e-2);
  CHECK(err_c / err_f == doctest::Approx(4.0).epsilon(0.3));

  // the zero mode's discrete eigenvector is flat across all edges
  double lo = 1e300, hi = -1e300;
  for (const std::vector<double>& samples : coarse.modes[0].edge_samples) {
    for (double v : samples) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  CHECK(hi - lo < 1e-6 * std::max(std::abs(hi), std::abs(lo)));

  CHECK_THROWS_AS(discretize_oracle(g, 0.1, 4), Error);  // mesh too coarse
}

TEST_CASE("gap report reproduces the frozen diagnostics") {
  const Spectrum star = compute_spectrum(unequal_star(), 45);
  const GapReport rep = gap_report(star, 1);
  CHECK(rep.gamma > 0);
  CHECK(rep.gamma == doctest::Approx(0.071814190490801650).epsilon(1e-9));
  CHECK(rep.weak_p == doctest::Approx(0.026826441225828668).epsilon(1e-9));
  CHECK(rep.weak_p <= 1.5);
  CHECK_FALSE(rep.weak_gap_degenerate);
  CHECK(rep.weyl_min > 0.15);
  CHECK(rep.weyl_max < 0.8);
  // envelope is the running minimum: nonincreasing by construction
  for (size_t k = 1; k < rep.envelope_a.size(); ++k) {
    CHECK(rep.envelope_a[k] <= rep.envelope_a[k - 1]);
  }
  REQUIRE(rep.counting_samples.size() == 30);
  for (const CountingSample& s : rep.counting_samples) {
    CHECK(s.count == 0);
    CHECK(s.rho > 0);
  }

  const Spectrum tad = compute_spectrum(make_tadpole(2.0, std::sqrt(3.0)), 45);
  for (int m = 1; m <= 4; ++m) {
    const GapReport trep = gap_report(tad, m);
    CHECK(trep.gamma == doctest::Approx(kTadpoleBlockGaps[m - 1]).epsilon(1e-9));
  }
}

TEST_CASE("gap report needs enough eigenvalues") {
  const Spectrum spec = compute_spectrum(unequal_star(), 8);
  try {
    gap_report(spec, 1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientSpectrum);
  }
  CHECK_THROWS_AS(gap_report(compute_spectrum(unequal_star(), 12), 0), Error);
}

TEST_CASE("counting function counts strictly positive distances") {
  const Spectrum spec = compute_spectrum(unequal_star(), 45);
  // λ₁ = 0 and λ₃ = 1.78 both lie within 1.0 of λ₂ = 0.974
  CHECK(counting_function(spec, 2, 1.0) == 2);
  CHECK(counting_function(spec, 2, 0.5) == 0);
  CHECK_THROWS_AS(counting_function(spec, 0, 1.0), Error);
  CHECK_THROWS_AS(counting_function(spec, 2, -1.0), Error);
  CHECK_THROWS_AS(counting_function(spec, 45, 100.0), Error);  // truncated
}
