#include "graphctl/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "graphctl/control_op.hpp"
#include "graphctl/errors.hpp"
#include "graphctl/filtering.hpp"
#include "graphctl/metric_graph.hpp"
#include "graphctl/moment.hpp"
#include "graphctl/simulate.hpp"
#include "graphctl/spectral.hpp"
#include "graphctl/steer.hpp"

namespace graphctl {
namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// First failing requirement wins; the criterion keeps running so unrelated
// throws still surface, but the report names the quantity that broke.
struct Check {
  bool ok = true;
  std::string why;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      why = what;
    }
  }
};

struct LineFit {
  double intercept = 0;
  double slope = 0;
  double r2 = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean = sy / n;
  for (int i = 0; i < n; ++i) {
    const double pred = fit.intercept + fit.slope * x[i];
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

Eigen::VectorXd random_unit(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z(i) = gauss(gen);
  return z / z.norm();
}

// The two demonstration graphs with incommensurate edge lengths (simple
// spectra) shared by the oracle and hypothesis criteria.
std::vector<std::pair<std::string, MetricGraph>> demo_graphs() {
  std::vector<std::pair<std::string, MetricGraph>> out;
  out.emplace_back("star", make_star({1.0, std::sqrt(2.0), std::sqrt(3.0)}));
  out.emplace_back("tadpole", make_tadpole(2.0, std::sqrt(3.0)));
  return out;
}

MetricGraph demo_star() { return make_star({1.0, std::sqrt(2.0), std::sqrt(3.0)}); }

// ---------------------------------------------------------------------------
// A1 — equal-length Neumann star against the merged closed-form family
// j²π²/4: simple at even j, double at odd j (three arms share each tangent
// pole, contributing a two-dimensional eigenspace).

void a1(CriterionResult& r) {
  const MetricGraph g = make_star({1.0, 1.0, 1.0});
  const Spectrum spec = compute_spectrum(g, 20);

  std::vector<double> expected;
  std::vector<int> mult;
  for (int j = 0; static_cast<int>(expected.size()) < 20; ++j) {
    const int m = (j % 2 == 1) ? 2 : 1;
    for (int c = 0; c < m && static_cast<int>(expected.size()) < 20; ++c) {
      expected.push_back(0.25 * j * j * kPi * kPi);
      mult.push_back(m);
    }
  }

  Check c;
  double worst = 0;
  for (int k = 1; k <= 20; ++k) {
    const double want = expected[k - 1];
    const double rel = std::abs(spec.lambda(k) - want) / std::max(1.0, want);
    worst = std::max(worst, rel);
    c.require(rel < 1e-10, "lambda_" + std::to_string(k) + " off by " + fmt(rel));
    const EigenMode& mode = spec.mode(k);
    if (mult[k - 1] == 2) {
      c.require(mode.multiple && mode.multiplicity == 2,
                "k=" + std::to_string(k) + " missing multiplicity-2 flag");
    } else {
      c.require(!mode.multiple, "k=" + std::to_string(k) + " wrongly flagged multiple");
    }
  }
  r.pass = c.ok;
  r.detail = c.ok ? "worst rel err " + fmt(worst) : c.why;
}

// ---------------------------------------------------------------------------
// A2 — secular roots vs the finite-difference oracle, with a mesh-halving
// convergence check (second order: aggregate error ratio near 4).

void a2(CriterionResult& r) {
  Check c;
  std::ostringstream note;
  for (const auto& [name, g] : demo_graphs()) {
    const Spectrum spec = compute_spectrum(g, 10);
    const std::vector<double> coarse = discretize_oracle(g, 1e-3, 10).lambdas();
    const std::vector<double> fine = discretize_oracle(g, 5e-4, 10).lambdas();
    double err_c = 0, err_f = 0;
    for (int k = 1; k <= 10; ++k) {
      const double lam = spec.lambda(k);
      const double denom = std::max(1.0, lam);
      err_c = std::max(err_c, std::abs(coarse[k - 1] - lam) / denom);
      err_f = std::max(err_f, std::abs(fine[k - 1] - lam) / denom);
    }
    const double ratio = err_c / err_f;
    c.require(err_c < 1e-3, name + ": oracle mismatch " + fmt(err_c));
    c.require(ratio >= 3.0 && ratio <= 5.0, name + ": refinement ratio " + fmt(ratio));
    note << name << " err=" << fmt(err_c) << " ratio=" << fmt(ratio) << "  ";
  }
  r.pass = c.ok;
  r.detail = c.ok ? note.str() : c.why;
}

// ---------------------------------------------------------------------------
// A3 — spectral hypotheses behind the moment method: positive block gap for
// some M ≤ 4, two-sided Weyl bracket, sub-polynomial weak-gap decay, and an
// empty cluster count below the certified counting threshold.

void a3(CriterionResult& r) {
  Check c;
  std::ostringstream note;
  for (const auto& [name, g] : demo_graphs()) {
    const Spectrum spec = compute_spectrum(g, 45);

    int block = 0;
    double gamma = 0;
    for (int m = 1; m <= 4 && block == 0; ++m) {
      const GapReport rep = gap_report(spec, m);
      if (rep.gamma > 0) {
        block = m;
        gamma = rep.gamma;
      }
    }
    c.require(block > 0, name + ": no positive block gap for M <= 4");

    double weyl_min = std::numeric_limits<double>::infinity();
    double weyl_max = 0;
    for (int k = 2; k <= 40; ++k) {
      const double ratio = spec.lambda(k) / (static_cast<double>(k) * k);
      weyl_min = std::min(weyl_min, ratio);
      weyl_max = std::max(weyl_max, ratio);
    }
    c.require(weyl_min >= 0.15 && weyl_max <= 0.8,
              name + ": Weyl ratio range [" + fmt(weyl_min) + ", " + fmt(weyl_max) + "]");

    const GapReport rep = gap_report(spec, 1);
    c.require(rep.weak_p <= 1.5, name + ": weak-gap exponent " + fmt(rep.weak_p));

    c.require(static_cast<int>(rep.counting_samples.size()) == 30,
              name + ": counting samples incomplete (" +
                  std::to_string(rep.counting_samples.size()) + ")");
    for (const CountingSample& s : rep.counting_samples) {
      c.require(s.count == 0, name + ": N_" + std::to_string(s.k) + " = " +
                                  std::to_string(s.count) + " below threshold");
    }
    note << name << " M=" << block << " gamma=" << fmt(gamma) << " p=" << fmt(rep.weak_p)
         << "  ";
  }
  r.pass = c.ok;
  r.detail = c.ok ? note.str() : c.why;
}

// ---------------------------------------------------------------------------
// A4 — spreading of the multipliers used throughout: cos(πx/2L₁) on the first
// star arm and the linear profile on the tadpole loop couple mode 1 to every
// mode with polynomially bounded decay.

void a4(CriterionResult& r) {
  Check c;
  std::ostringstream note;

  const MetricGraph star = demo_star();
  const Spectrum sspec = compute_spectrum(star, 30);
  const ControlOperator bs = ControlOperator::cosine_on_edge(0, 3);
  const SpreadingReport srep = verify_spreading(bs, sspec, 1, 30);
  c.require(srep.pass, "star: spreading lower bound failed");
  c.require(srep.q <= 2.5, "star: fitted q " + fmt(srep.q));
  const double closed = 2.0 / (kPi * star.total_length());
  c.require(std::abs(srep.first_coupling - closed) < 1e-8,
            "star: <B phi_1, phi_1> = " + fmt(srep.first_coupling) + " vs " + fmt(closed));
  const double quad = coupling_quadrature(bs, sspec, 1, 1);
  c.require(std::abs(quad - closed) < 1e-8, "star: quadrature route " + fmt(quad));
  note << "star q=" << fmt(srep.q) << " b1=" << fmt(srep.first_coupling) << "  ";

  const MetricGraph tad = make_tadpole(2.0, std::sqrt(3.0));
  const Spectrum tspec = compute_spectrum(tad, 30);
  const ControlOperator bt = ControlOperator::monomial_on_edge(0, 2, 1);
  const SpreadingReport trep = verify_spreading(bt, tspec, 1, 30);
  c.require(trep.pass, "tadpole: spreading lower bound failed");
  c.require(trep.q <= 2.0, "tadpole: fitted q " + fmt(trep.q));
  note << "tadpole q=" << fmt(trep.q);

  r.pass = c.ok;
  r.detail = c.ok ? note.str() : c.why;
}

// ---------------------------------------------------------------------------
// A5 — linearized null control on the unequal star: five random unit initial
// coefficient vectors, ten modes, horizon 0.5. The Gram matrix is past the
// double-precision condition budget here, so the escalation to extended
// arithmetic is exercised on the real configuration.

void a5(CriterionResult& r) {
  const MetricGraph star = demo_star();
  const Spectrum spec = compute_spectrum(star, 10);
  const std::vector<double> lambdas = spec.lambdas();
  const ControlOperator b_op = ControlOperator::cosine_on_edge(0, 3);
  std::vector<double> b(10);
  for (int k = 1; k <= 10; ++k) b[k - 1] = coupling(b_op, spec, 1, k);
  const double horizon = 0.5;

  Check c;
  double worst_state = 0, worst_res = 0;
  Precision used = Precision::Standard;
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const Eigen::VectorXd z0 = random_unit(10, seed);
    const std::vector<double> zv(z0.data(), z0.data() + z0.size());
    MomentProblem prob;
    prob.lambdas = lambdas;
    prob.T = horizon;
    prob.targets = null_control_targets(zv, b);
    prob.provenance = TargetProvenance::FromState;
    const ControlSignal u = solve_moment(prob, Precision::Auto);
    worst_res = std::max(worst_res, u.residual_raw);
    c.require(u.residual_raw < 1e-8,
              "seed " + std::to_string(seed) + ": moment residual " + fmt(u.residual_raw));
    const Eigen::VectorXd zt = evolve_linearized(lambdas, b, z0, u);
    worst_state = std::max(worst_state, zt.norm());
    c.require(zt.norm() < 1e-6,
              "seed " + std::to_string(seed) + ": |z(T)| = " + fmt(zt.norm()));
    used = u.used;
  }

  const BiorthogonalFamily fam = finite_biorthogonal(lambdas, horizon, Precision::Auto);
  c.require(fam.residual_raw < 1e-8, "biorthogonality residual " + fmt(fam.residual_raw));

  r.pass = c.ok;
  r.detail = c.ok ? "worst |z(T)| " + fmt(worst_state) + ", moment res " + fmt(worst_res) +
                        ", biortho res " + fmt(fam.residual_raw) + " [" +
                        precision_name(used) + "]"
                  : c.why;
}

// ---------------------------------------------------------------------------
// A6 — nonlinear steering to the ground eigensolution from a small transverse
// deviation, and again from twice the deviation (the basin is not a point).

void a6(CriterionResult& r) {
  const MetricGraph star = demo_star();
  const Spectrum spec = compute_spectrum(star, 20);
  SteerSetup setup;
  setup.lambdas = spec.lambdas();
  setup.coupling = coupling_matrix(ControlOperator::cosine_on_edge(0, 3), spec, 20);

  Eigen::VectorXd psi0 = Eigen::VectorXd::Zero(20);
  psi0(0) = 1.0;
  psi0(1) = 0.01;
  const SteeringRun run1 = steer_to_eigensolution(setup, psi0, 1, 1.0, 8, 1e-4);

  Check c;
  c.require(run1.converged, "deviation 0.01 not steered in 8 windows (residual " +
                                fmt(run1.final_residual) + ")");

  psi0(1) = 0.02;
  const SteeringRun run2 = steer_to_eigensolution(setup, psi0, 1, 1.0, 12, 1e-4);
  c.require(run2.converged, "deviation 0.02 not steered (residual " +
                                fmt(run2.final_residual) + ")");

  r.pass = c.ok;
  r.detail = c.ok ? "0.01: " + std::to_string(run1.iterations) + " windows, res " +
                        fmt(run1.final_residual) + "; 0.02: " +
                        std::to_string(run2.iterations) + " windows, res " +
                        fmt(run2.final_residual)
                  : c.why;
}

// ---------------------------------------------------------------------------
// A7 — short-horizon blow-up of the control cost: log K(T) against 1/T is
// affine with positive slope.

void a7(CriterionResult& r) {
  const MetricGraph star = demo_star();
  const Spectrum spec = compute_spectrum(star, 8);
  const ControlOperator b_op = ControlOperator::cosine_on_edge(0, 3);
  std::vector<double> b(8);
  for (int k = 1; k <= 8; ++k) b[k - 1] = coupling(b_op, spec, 1, k);

  const std::vector<double> horizons{0.1, 0.2, 0.4, 0.7, 1.0};
  std::vector<double> inv_t, log_k;
  for (double t : horizons) {
    const double cost = control_cost(spec.lambdas(), b, t);
    inv_t.push_back(1.0 / t);
    log_k.push_back(std::log(cost));
  }
  const LineFit fit = fit_line(inv_t, log_k);

  Check c;
  c.require(fit.slope > 0, "fitted nu " + fmt(fit.slope) + " not positive");
  c.require(fit.r2 > 0.9, "R^2 " + fmt(fit.r2));
  r.pass = c.ok;
  r.detail = c.ok ? "nu=" + fmt(fit.slope) + " R2=" + fmt(fit.r2) +
                        " K(0.1)=" + fmt(std::exp(log_k.front()))
                  : c.why;
}

// ---------------------------------------------------------------------------
// A8 — semi-global strategy: a transverse deviation of 1.0 (twenty times the
// basin radius) decays freely until the relative deviation reaches the basin;
// the measured wait must match the closed-form decay time of mode 2.

void a8(CriterionResult& r) {
  const MetricGraph star = demo_star();
  const Spectrum spec = compute_spectrum(star, 20);
  SteerSetup setup;
  setup.lambdas = spec.lambdas();
  setup.coupling = coupling_matrix(ControlOperator::cosine_on_edge(0, 3), spec, 20);

  Eigen::VectorXd y0 = Eigen::VectorXd::Zero(20);
  y0(0) = 1.0;
  y0(1) = 1.0;
  const SteeringRun run =
      semiglobal_steer(setup, y0, SemiglobalMode::Strip, 0.5, 2.0, 1.0, 14, 1e-4);

  const double expected = std::log(1.0 / 0.05) / setup.lambdas[1];
  Check c;
  c.require(run.converged, "strip run not converged (residual " +
                               fmt(run.final_residual) + ")");
  c.require(std::abs(run.wait_time - expected) <= 0.2 * expected,
            "wait " + fmt(run.wait_time) + " vs expected " + fmt(expected));
  r.pass = c.ok;
  r.detail = c.ok ? "wait " + fmt(run.wait_time) + " (expected " + fmt(expected) + "), " +
                        std::to_string(run.iterations) + " windows, res " +
                        fmt(run.final_residual)
                  : c.why;
}

// ---------------------------------------------------------------------------
// A9 — space filtering on the 4-edge Dirichlet star with the x²-multiplier on
// the two equal arms: the antisymmetric subspace is invariant, a full-graph
// run started inside it stays inside it, and the reduced interval problem is
// null controllable like A5.

bool antisymmetric_pattern(const EigenMode& mode) {
  if (mode.edge_forms.size() != 4) return false;
  const double a0 = mode.edge_forms[0].amp;
  const double a1 = mode.edge_forms[1].amp;
  const double a2 = mode.edge_forms[2].amp;
  const double a3 = mode.edge_forms[3].amp;
  const double big = std::max(std::abs(a0), std::abs(a1));
  return big > 0 && std::abs(a2) <= 1e-12 * big && std::abs(a3) <= 1e-12 * big &&
         std::abs(a0 + a1) <= 1e-12 * big;
}

void a9(CriterionResult& r) {
  const MetricGraph star4 =
      make_star({1.0, 1.0, 1.0, std::sqrt(2.0)}, VertexCondition::Dirichlet);
  const ControlOperator multiplier({EdgeProfile::monomial(2), EdgeProfile::monomial(2),
                                    EdgeProfile::none(), EdgeProfile::none()});
  const InvariantSubspace sub = build_invariant_subspace(star4, 8);

  Check c;
  const InvarianceReport inv = check_B_invariance(multiplier, sub);
  c.require(inv.pass, "invariance leak " + fmt(inv.worst_residual));

  // reduced problem on the interval: exponents k²π², multiplier x²
  const ReducedProblem red = reduce_to_interval(multiplier, sub, 8);
  const std::vector<double> mu = red.spectrum.lambdas();
  std::vector<double> bt(8);
  for (int k = 1; k <= 8; ++k) bt[k - 1] = coupling(red.multiplier, red.spectrum, 1, k);
  const Eigen::VectorXd z0 = random_unit(8, 9);
  const std::vector<double> zv(z0.data(), z0.data() + z0.size());
  MomentProblem prob;
  prob.lambdas = mu;
  prob.T = 0.5;
  prob.targets = null_control_targets(zv, bt);
  prob.provenance = TargetProvenance::FromState;
  const ControlSignal u = solve_moment(prob, Precision::Auto);
  c.require(u.residual_raw < 1e-8, "reduced moment residual " + fmt(u.residual_raw));
  const Eigen::VectorXd zt = evolve_linearized(mu, bt, z0, u);
  c.require(zt.norm() < 1e-6, "reduced |z(T)| = " + fmt(zt.norm()));

  // full 4-edge run started on the first generator, driven by the same signal
  const Spectrum spec4 = compute_spectrum(star4, 20);
  const GraphFunction f1 = sub.generator(1);
  Eigen::VectorXd full0(20);
  for (int k = 1; k <= 20; ++k) {
    full0(k - 1) = inner_product(f1, spec4.eigenfunction(k), star4);
  }
  c.require(std::abs(full0.norm() - 1.0) < 1e-10,
            "generator embedding norm " + fmt(full0.norm()));
  const Eigen::MatrixXd m4 = coupling_matrix(multiplier, spec4, 20);
  const Trajectory traj = evolve_bilinear(spec4.lambdas(), m4, u, full0);
  double outside = 0;
  for (int k = 1; k <= 20; ++k) {
    if (!antisymmetric_pattern(spec4.mode(k))) {
      outside += traj.final_state(k - 1) * traj.final_state(k - 1);
    }
  }
  c.require(outside < 1e-8, "out-of-subspace energy " + fmt(outside));

  r.pass = c.ok;
  r.detail = c.ok ? "leak " + fmt(inv.worst_residual) + ", reduced |z(T)| " + fmt(zt.norm()) +
                        ", outside energy " + fmt(outside)
                  : c.why;
}

// ---------------------------------------------------------------------------
// A10 — biorthogonal norm growth on the interval spectrum k²π²: the measured
// log-norms plus λ_k T stay under an affine function of √λ_k with positive
// fitted constants, after the gap penalty shared by all modes is split off.

void a10(CriterionResult& r) {
  const int n = 10;
  std::vector<double> lambdas(n);
  for (int k = 1; k <= n; ++k) lambdas[k - 1] = static_cast<double>(k) * k * kPi * kPi;
  const double horizon = 1.0;
  const BiorthogonalFamily fam = finite_biorthogonal(lambdas, horizon, Precision::Auto);

  std::vector<double> sq(n);
  for (int k = 0; k < n; ++k) sq[k] = std::sqrt(lambdas[k]);
  double gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k + 1 < n; ++k) gap = std::min(gap, sq[k + 1] - sq[k]);
  // uniform √λ spacing: the envelope a and the 1-block gap coincide
  const double pen = 2.0 * std::log(1.0 + gap * gap / (gap * (gap + 2.0 * sq[0])));

  std::vector<double> xs, ys;
  for (int k = 1; k <= n / 2; ++k) {
    xs.push_back(sq[k - 1]);
    ys.push_back(fam.log_norms[k - 1] + lambdas[k - 1] * horizon - pen);
  }
  const LineFit fit = fit_line(xs, ys);

  Check c;
  c.require(fit.intercept > 0 && fit.slope > 0,
            "fitted constants c0=" + fmt(fit.intercept) + " c1=" + fmt(fit.slope));
  double margin = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= n; ++k) {
    const double grown = fam.log_norms[k - 1] + lambdas[k - 1] * horizon;
    const double bound = fit.intercept + fit.slope * sq[k - 1] + pen + 0.5;
    margin = std::min(margin, bound - grown);
    c.require(grown <= bound, "norm bound violated at k=" + std::to_string(k) + " by " +
                                  fmt(grown - bound));
  }
  r.pass = c.ok;
  r.detail = c.ok ? "c0=" + fmt(fit.intercept) + " c1=" + fmt(fit.slope) + " pen=" + fmt(pen) +
                        " min margin " + fmt(margin)
                  : c.why;
}

// ---------------------------------------------------------------------------

using CriterionBody = void (*)(CriterionResult&);

CriterionResult run_criterion(const std::string& id, double budget_s, CriterionBody body) {
  CriterionResult result;
  result.id = id;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(result);
  } catch (const Error& e) {
    result.pass = false;
    result.detail = std::string("error: ") + e.what();
  } catch (const std::exception& e) {
    result.pass = false;
    result.detail = std::string("unexpected: ") + e.what();
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && result.pass && result.seconds > budget_s) {
    result.pass = false;
    result.detail += " [runtime " + fmt(result.seconds) + " s over the " + fmt(budget_s) +
                     " s budget]";
  }
  return result;
}

}  // namespace

std::vector<CriterionResult> run_acceptance() {
  std::vector<CriterionResult> out;
  out.push_back(run_criterion("A1", 1.0, a1));
  out.push_back(run_criterion("A2", 30.0, a2));
  out.push_back(run_criterion("A3", 0, a3));
  out.push_back(run_criterion("A4", 0, a4));
  out.push_back(run_criterion("A5", 60.0, a5));
  out.push_back(run_criterion("A6", 120.0, a6));
  out.push_back(run_criterion("A7", 0, a7));
  out.push_back(run_criterion("A8", 0, a8));
  out.push_back(run_criterion("A9", 0, a9));
  out.push_back(run_criterion("A10", 0, a10));
  return out;
}

std::string format_acceptance(const std::vector<CriterionResult>& results) {
  std::ostringstream os;
  for (const CriterionResult& r : results) {
    char timing[32];
    std::snprintf(timing, sizeof timing, "%6.2f s", r.seconds);
    os << r.id;
    for (size_t pad = r.id.size(); pad < 4; ++pad) os << ' ';
    os << (r.pass ? "PASS" : "FAIL") << "  (" << timing << ")";
    if (!r.detail.empty()) os << "  " << r.detail;
    os << '\n';
  }
  return os.str();
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CriterionResult& r) { return r.pass; });
}

}  // namespace graphctl
