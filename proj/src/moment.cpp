#include "graphctl/moment.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace graphctl {
namespace {

// Gram condition number a double Cholesky solve is still trusted for.
constexpr double kCondBudget = 1e12;
// Acceptable defect of the computed inverse / moment solution after undoing
// the exponential shift.
constexpr double kResidualBudget = 1e-8;

void validate_exponents(const std::vector<double>& lambdas, double T) {
  if (lambdas.empty()) fail(ErrorCode::BadInput, "empty exponent family");
  if (!(T > 0) || !std::isfinite(T)) fail(ErrorCode::BadInput, "horizon must be positive");
  for (double l : lambdas) {
    if (!std::isfinite(l)) fail(ErrorCode::BadInput, "non-finite exponent");
  }
  for (size_t i = 0; i + 1 < lambdas.size(); ++i) {
    const double gap = lambdas[i + 1] - lambdas[i];
    if (gap < 0) fail(ErrorCode::BadInput, "exponents must be sorted increasingly");
    const double scale = std::max({1.0, std::abs(lambdas[i]), std::abs(lambdas[i + 1])});
    if (gap <= 1e-12 * scale) {
      fail(ErrorCode::DegenerateSpectrum,
           "exponents " + std::to_string(i + 1) + " and " + std::to_string(i + 2) +
               " coincide; the exponential family is linearly dependent");
    }
  }
}

double gram_entry(double s, double T) {
  if (s == 0) return T;
  return -std::expm1(-s * T) / s;
}

xreal gram_entry_x(const xreal& s, const xreal& T) {
  if (s == 0) return T;
  return (xreal(1) - exp(-s * T)) / s;
}

struct ResidualPair {
  double shifted = 0;
  double raw = 0;
};

// max |E_{kj}| and max e^{(λ_j-λ_k)T} |E_{kj}| for E = X G - I, with the
// amplification carried out in extended precision so overflow cannot mask a
// defect (the double result may round to inf — that is the honest answer).
ResidualPair inverse_residual(const XMatrix& x, const XMatrix& g,
                              const std::vector<double>& lambdas, double T) {
  const int n = g.rows();
  xreal shifted = 0, raw = 0;
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      xreal e = k == j ? xreal(-1) : xreal(0);
      for (int l = 0; l < n; ++l) e += x(k, l) * g(l, j);
      const xreal ae = abs(e);
      shifted = std::max(shifted, ae, std::less<xreal>());
      const xreal amp = ae * exp(xreal(lambdas[j] - lambdas[k]) * T);
      raw = std::max(raw, amp, std::less<xreal>());
    }
  }
  return {to_double(shifted), to_double(raw)};
}

XMatrix promote(const Eigen::MatrixXd& a) {
  XMatrix out(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) out(i, j) = xreal(a(i, j));
  }
  return out;
}

XMatrix inverse_from_cholesky(const XMatrix& l) {
  const int n = l.rows();
  XMatrix inv(n, n);
  for (int j = 0; j < n; ++j) {
    xvec e(n, xreal(0));
    e[j] = 1;
    const xvec col = cholesky_solve(l, e);
    for (int i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

BiorthogonalFamily assemble_family(const std::vector<double>& lambdas, double T,
                                   const XMatrix& ginv, const XMatrix& g_x, double cond,
                                   Precision used) {
  const int n = static_cast<int>(lambdas.size());
  BiorthogonalFamily fam;
  fam.lambdas = lambdas;
  fam.T = T;
  fam.cond = cond;
  fam.used = used;
  fam.C = XMatrix(n, n);
  fam.log_norms.resize(n);
  fam.norms.resize(n);
  for (int k = 0; k < n; ++k) {
    const xreal damp = exp(xreal(-lambdas[k]) * T);
    for (int l = 0; l < n; ++l) fam.C(k, l) = damp * ginv(k, l);
    const xreal diag = ginv(k, k);
    if (!(diag > 0)) {
      fail(ErrorCode::IllConditioned, "computed Gram inverse lost positivity on the diagonal");
    }
    fam.log_norms[k] = to_double(-xreal(lambdas[k]) * T + log(diag) / 2);
    fam.norms[k] = std::exp(fam.log_norms[k]);
  }
  const ResidualPair res = inverse_residual(ginv, g_x, lambdas, T);
  fam.residual_shifted = res.shifted;
  fam.residual_raw = res.raw;
  return fam;
}

}  // namespace

const char* precision_name(Precision p) {
  switch (p) {
    case Precision::Standard: return "standard";
    case Precision::Extended: return "extended";
    case Precision::Auto: return "auto";
  }
  return "?";
}

Eigen::MatrixXd gram_matrix(const std::vector<double>& lambdas, double T) {
  validate_exponents(lambdas, T);
  const int n = static_cast<int>(lambdas.size());
  Eigen::MatrixXd g(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = k; l < n; ++l) {
      const double v = gram_entry(lambdas[k] + lambdas[l], T);
      g(k, l) = v;
      g(l, k) = v;
    }
  }
  return g;
}

XMatrix gram_matrix_x(const std::vector<double>& lambdas, double T) {
  validate_exponents(lambdas, T);
  const int n = static_cast<int>(lambdas.size());
  const xreal tx(T);
  XMatrix g(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = k; l < n; ++l) {
      const xreal v = gram_entry_x(xreal(lambdas[k]) + xreal(lambdas[l]), tx);
      g(k, l) = v;
      g(l, k) = v;
    }
  }
  return g;
}

BiorthogonalFamily finite_biorthogonal(const std::vector<double>& lambdas, double T,
                                       Precision precision) {
  const XMatrix g_x = gram_matrix_x(lambdas, T);

  if (precision != Precision::Extended) {
    const Eigen::MatrixXd g = gram_matrix(lambdas, T);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
    const double smin = svd.singularValues().minCoeff();
    const double cond = smin > 0 ? svd.singularValues().maxCoeff() / smin
                                 : std::numeric_limits<double>::infinity();
    if (cond > kCondBudget) {
      if (precision == Precision::Standard) {
        fail(ErrorCode::IllConditioned,
             "Gram condition " + std::to_string(cond) + " exceeds the double-precision budget");
      }
    } else {
      const Eigen::MatrixXd inv =
          g.llt().solve(Eigen::MatrixXd::Identity(g.rows(), g.cols()));
      BiorthogonalFamily fam =
          assemble_family(lambdas, T, promote(inv), g_x, cond, Precision::Standard);
      if (fam.residual_shifted <= kResidualBudget) return fam;
      if (precision == Precision::Standard) {
        fail(ErrorCode::ResidualTooLarge,
             "biorthogonality defect " + std::to_string(fam.residual_shifted) +
                 " exceeds the budget in double precision");
      }
    }
    // Auto falls through to the extended path.
  }

  const XMatrix l = cholesky(g_x);
  const XMatrix ginv = inverse_from_cholesky(l);
  const double cond = to_double(largest_singular_value(g_x) * largest_singular_value(ginv));
  return assemble_family(lambdas, T, ginv, g_x, cond, Precision::Extended);
}

ControlSignal::ControlSignal(std::vector<double> lambdas, double T, xvec coefficients)
    : lambdas_(std::move(lambdas)), T_(T), coefficients_(std::move(coefficients)) {
  if (lambdas_.size() != coefficients_.size()) {
    fail(ErrorCode::BadInput, "coefficient count does not match the exponent family");
  }
}

double ControlSignal::value(double s) const {
  xreal acc = 0;
  for (size_t k = 0; k < lambdas_.size(); ++k) {
    acc += coefficients_[k] * exp(xreal(-lambdas_[k]) * (xreal(T_) - xreal(s)));
  }
  return to_double(acc);
}

std::vector<double> ControlSignal::sample_grid(int n) const {
  if (n < 1) fail(ErrorCode::BadInput, "sample grid needs at least one interval");
  const size_t m = lambdas_.size();
  xvec value(m), ratio(m);
  for (size_t k = 0; k < m; ++k) {
    value[k] = exp(xreal(-lambdas_[k]) * T_);
    ratio[k] = exp(xreal(lambdas_[k]) * T_ / n);
  }
  std::vector<double> out(n + 1);
  for (int i = 0; i <= n; ++i) {
    xreal acc = 0;
    for (size_t k = 0; k < m; ++k) acc += coefficients_[k] * value[k];
    out[i] = to_double(acc);
    if (i < n) {
      for (size_t k = 0; k < m; ++k) value[k] *= ratio[k];
    }
  }
  return out;
}

namespace {

struct SolveOutcome {
  xvec c;
  ResidualPair residual;
  double l2 = 0;
};

SolveOutcome finish_solve(const XMatrix& g_x, const xvec& c, const xvec& rhs,
                          const std::vector<double>& lambdas, double T) {
  SolveOutcome out;
  out.c = c;
  const xvec gc = matvec(g_x, c);
  xreal shifted = 0, raw = 0;
  for (size_t k = 0; k < c.size(); ++k) {
    const xreal r = abs(gc[k] - rhs[k]);
    shifted = std::max(shifted, r, std::less<xreal>());
    raw = std::max(raw, r * exp(xreal(lambdas[k]) * T), std::less<xreal>());
  }
  out.residual = {to_double(shifted), to_double(raw)};
  xreal quad = dot(c, gc);
  if (quad < 0) quad = 0;  // roundoff guard: G is positive definite
  out.l2 = to_double(sqrt(quad));
  return out;
}

}  // namespace

ControlSignal solve_moment(const MomentProblem& problem, Precision precision) {
  validate_exponents(problem.lambdas, problem.T);
  const size_t n = problem.lambdas.size();
  if (problem.targets.size() != n) {
    fail(ErrorCode::BadInput, "target count does not match the exponent family");
  }
  for (double d : problem.targets) {
    if (!std::isfinite(d)) fail(ErrorCode::BadInput, "non-finite moment target");
  }

  if (std::all_of(problem.targets.begin(), problem.targets.end(),
                  [](double d) { return d == 0; })) {
    ControlSignal zero(problem.lambdas, problem.T, xvec(n, xreal(0)));
    zero.used = precision == Precision::Extended ? Precision::Extended : Precision::Standard;
    return zero;
  }

  const XMatrix g_x = gram_matrix_x(problem.lambdas, problem.T);
  xvec rhs(n);
  for (size_t k = 0; k < n; ++k) {
    rhs[k] = xreal(problem.targets[k]) * exp(xreal(-problem.lambdas[k]) * problem.T);
  }
  double dnorm = 0;
  for (double d : problem.targets) dnorm += d * d;
  dnorm = std::sqrt(dnorm);

  if (precision != Precision::Extended) {
    const Eigen::MatrixXd g = gram_matrix(problem.lambdas, problem.T);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
    const double smin = svd.singularValues().minCoeff();
    const double cond = smin > 0 ? svd.singularValues().maxCoeff() / smin
                                 : std::numeric_limits<double>::infinity();
    if (cond > kCondBudget) {
      if (precision == Precision::Standard) {
        fail(ErrorCode::IllConditioned,
             "Gram condition " + std::to_string(cond) + " exceeds the double-precision budget");
      }
    } else {
      Eigen::VectorXd rhs_d(n);
      for (size_t k = 0; k < n; ++k) rhs_d[static_cast<int>(k)] = to_double(rhs[k]);
      const Eigen::VectorXd c_d = g.llt().solve(rhs_d);
      xvec c(n);
      for (size_t k = 0; k < n; ++k) c[k] = xreal(c_d[static_cast<int>(k)]);
      const SolveOutcome out = finish_solve(g_x, c, rhs, problem.lambdas, problem.T);
      if (out.residual.raw <= kResidualBudget * dnorm) {
        ControlSignal u(problem.lambdas, problem.T, out.c);
        u.used = Precision::Standard;
        u.residual_raw = out.residual.raw;
        u.residual_shifted = out.residual.shifted;
        u.l2_norm = out.l2;
        return u;
      }
      if (precision == Precision::Standard) {
        fail(ErrorCode::ResidualTooLarge,
             "moment residual " + std::to_string(out.residual.raw) +
                 " exceeds the budget in double precision");
      }
    }
    // Auto falls through to the extended path.
  }

  const XMatrix l = cholesky(g_x);
  const xvec c = cholesky_solve(l, rhs);
  const SolveOutcome out = finish_solve(g_x, c, rhs, problem.lambdas, problem.T);
  ControlSignal u(problem.lambdas, problem.T, out.c);
  u.used = Precision::Extended;
  u.residual_raw = out.residual.raw;
  u.residual_shifted = out.residual.shifted;
  u.l2_norm = out.l2;
  return u;
}

std::vector<double> null_control_targets(const std::vector<double>& z,
                                         const std::vector<double>& couplings) {
  if (z.size() != couplings.size()) {
    fail(ErrorCode::BadInput, "state and coupling vectors differ in length");
  }
  std::vector<double> d(z.size());
  for (size_t k = 0; k < z.size(); ++k) {
    if (std::abs(couplings[k]) <= 1e-14) {
      fail(ErrorCode::ZeroCoupling,
           "coupling of mode " + std::to_string(k + 1) + " is below the floor");
    }
    d[k] = z[k] / couplings[k];
  }
  return d;
}

double control_cost(const std::vector<double>& lambdas, const std::vector<double>& couplings,
                    double T, int samples) {
  if (couplings.size() != lambdas.size()) {
    fail(ErrorCode::BadInput, "coupling count does not match the exponent family");
  }
  for (size_t k = 0; k < couplings.size(); ++k) {
    if (std::abs(couplings[k]) <= 1e-14) {
      fail(ErrorCode::ZeroCoupling,
           "coupling of mode " + std::to_string(k + 1) + " is below the floor");
    }
  }
  const XMatrix g_x = gram_matrix_x(lambdas, T);
  const XMatrix l = cholesky(g_x);
  const int n = static_cast<int>(lambdas.size());

  // columns of M = L⁻¹ D⁻¹ diag(1/b)
  XMatrix m(n, n);
  for (int k = 0; k < n; ++k) {
    xvec e(n, xreal(0));
    e[k] = exp(xreal(-lambdas[k]) * T) / xreal(couplings[k]);
    const xvec col = forward_solve(l, e);
    for (int i = 0; i < n; ++i) m(i, k) = col[i];
  }

  xreal best = largest_singular_value(m);

  // independent sanity directions: ‖M z‖ for random unit z never exceeds the
  // true operator norm, so max(power iteration, samples) can only improve a
  // stalled iteration
  std::mt19937 rng(0x5eedc057u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    std::vector<double> z(n);
    double zn = 0;
    for (double& v : z) {
      v = gauss(rng);
      zn += v * v;
    }
    zn = std::sqrt(zn);
    if (zn == 0) continue;
    xvec zx(n);
    for (int i = 0; i < n; ++i) zx[i] = xreal(z[i] / zn);
    best = std::max(best, norm(matvec(m, zx)), std::less<xreal>());
  }
  return to_double(best);
}

}  // namespace graphctl
