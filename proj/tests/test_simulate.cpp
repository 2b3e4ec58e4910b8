#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "graphctl/simulate.hpp"

using namespace graphctl;

namespace {

ControlSignal constant_control(double value, double horizon) {
  return ControlSignal({0.0}, horizon, xvec{xreal(value)});
}

}  // namespace

TEST_CASE("free evolution damps each mode independently") {
  const std::vector<double> lam{0.0, 1.0, 4.0};
  Eigen::VectorXd z0(3);
  z0 << 2.0, 3.0, -1.0;
  const Eigen::VectorXd z = free_evolution(lam, z0, 0.5);
  CHECK(z[0] == 2.0);
  CHECK(z[1] == doctest::Approx(3.0 * std::exp(-0.5)).epsilon(1e-15));
  CHECK(z[2] == doctest::Approx(-std::exp(-2.0)).epsilon(1e-15));

  CHECK_THROWS_AS(free_evolution(lam, Eigen::VectorXd::Ones(2), 1.0), Error);
  CHECK_THROWS_AS(free_evolution(lam, z0, -0.1), Error);
}

TEST_CASE("default step respects the fastest mode") {
  CHECK(default_dt(0.0) == 1e-4);
  CHECK(default_dt(50.0) == 1e-4);
  CHECK(default_dt(1e4) == doctest::Approx(1e-5).epsilon(1e-15));
}

TEST_CASE("steps too coarse for the decay are rejected") {
  const std::vector<double> lam{1.0, 100.0};
  const Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  const ControlSignal u = constant_control(0.0, 1.0);
  try {
    evolve_bilinear(lam, m, u, Eigen::VectorXd::Ones(2), 0.01);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StepTooLarge);
  }
  CHECK_THROWS_AS(evolve_bilinear(lam, Eigen::MatrixXd::Zero(3, 3), u,
                                  Eigen::VectorXd::Ones(2), 0.0),
                  Error);
}

TEST_CASE("diagonal coupling with constant control integrates exactly") {
  const std::vector<double> lam{0.3, 1.7};
  Eigen::MatrixXd m(2, 2);
  m << 0.5, 0.0, 0.0, -0.25;
  const double c = 0.8, horizon = 0.4;
  Eigen::VectorXd z0(2);
  z0 << 1.0, -2.0;

  const Trajectory traj = evolve_bilinear(lam, m, constant_control(c, horizon), z0);
  CHECK(traj.steps == 4000);  // default dt = 1e-4
  CHECK(traj.dt == doctest::Approx(horizon / traj.steps).epsilon(1e-15));
  REQUIRE(static_cast<int>(traj.times.size()) == traj.steps + 1);
  REQUIRE(static_cast<int>(traj.states.size()) == traj.steps + 1);
  CHECK(traj.times.back() == doctest::Approx(horizon).epsilon(1e-14));

  // Λ and M commute here, so the splitting carries no error beyond roundoff
  for (int k = 0; k < 2; ++k) {
    const double want = std::exp(-(lam[k] + c * m(k, k)) * horizon) * z0[k];
    CHECK(traj.final_state[k] == doctest::Approx(want).epsilon(1e-11));
  }
  CHECK(traj.final_norm == doctest::Approx(traj.final_state.norm()).epsilon(1e-15));
  CHECK(traj.energy_above(0) == doctest::Approx(traj.final_norm * traj.final_norm).epsilon(1e-14));
  CHECK(traj.energy_above(1) ==
        doctest::Approx(traj.final_state[1] * traj.final_state[1]).epsilon(1e-14));
  CHECK(traj.energy_above(2) == 0.0);
}

TEST_CASE("splitting converges at second order on a non-commuting pair") {
  const std::vector<double> lam{1.0, 3.0};
  Eigen::MatrixXd m(2, 2);
  m << 0.2, 0.1, 0.1, -0.3;
  const double horizon = 0.1;
  const ControlSignal u({0.5, 2.0}, horizon, xvec{xreal(0.7), xreal(-0.4)});
  Eigen::VectorXd z0(2);
  z0 << 0.6, -0.8;

  const Eigen::VectorXd ref = evolve_bilinear(lam, m, u, z0, horizon / 512).final_state;
  std::vector<double> errs;
  for (int div : {8, 16, 32}) {
    const Eigen::VectorXd z = evolve_bilinear(lam, m, u, z0, horizon / div).final_state;
    errs.push_back((z - ref).norm());
  }
  CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.13));
  CHECK(errs[1] / errs[2] == doctest::Approx(4.0).epsilon(0.13));
}

TEST_CASE("runaway growth is reported, not returned") {
  const std::vector<double> lam{1.0, 1.0};
  const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
  try {
    evolve_bilinear(lam, m, constant_control(-1e6, 1.0), Eigen::VectorXd::Ones(2), 0.25);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteState);
  }
}

TEST_CASE("linearized evolution matches the Gram closed form") {
  const std::vector<double> lam{0.0, 1.0, 2.0};
  const double horizon = 0.7;
  const ControlSignal u(lam, horizon, xvec{xreal(0.3), xreal(-0.2), xreal(0.1)});
  const std::vector<double> b{1.0, 0.5, -0.25};
  Eigen::VectorXd z0(3);
  z0 << 1.0, 1.0, 1.0;

  const Eigen::MatrixXd g = gram_matrix(lam, horizon);
  Eigen::VectorXd c(3);
  c << 0.3, -0.2, 0.1;
  const Eigen::VectorXd gc = g * c;

  const Eigen::VectorXd z = evolve_linearized(lam, b, z0, u);
  for (int k = 0; k < 3; ++k) {
    const double want = std::exp(-lam[k] * horizon) * z0[k] - b[k] * gc[k];
    CHECK(z[k] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("a null control returned by the moment solve annihilates the state") {
  const std::vector<double> lam{0.5, 1.5, 3.5};
  const std::vector<double> b{1.0, -0.7, 0.4};
  Eigen::VectorXd z0(3);
  z0 << 0.9, -0.3, 0.2;

  const std::vector<double> d = null_control_targets({z0[0], z0[1], z0[2]}, b);
  const ControlSignal u =
      solve_moment({lam, 1.0, d, TargetProvenance::FromState}, Precision::Auto);
  const Eigen::VectorXd z = evolve_linearized(lam, b, z0, u);
  CHECK(z.norm() < 1e-10);
}

TEST_CASE("linearized evolution rejects mismatched exponent families") {
  const ControlSignal u({0.0, 1.0}, 1.0, xvec{xreal(1.0), xreal(1.0)});
  CHECK_THROWS_AS(evolve_linearized({0.0, 1.1}, {1.0, 1.0}, Eigen::VectorXd::Ones(2), u), Error);
  CHECK_THROWS_AS(evolve_linearized({0.0, 1.0}, {1.0}, Eigen::VectorXd::Ones(2), u), Error);
  CHECK_THROWS_AS(evolve_linearized({0.0, 1.0}, {1.0, 1.0}, Eigen::VectorXd::Ones(3), u), Error);
}
