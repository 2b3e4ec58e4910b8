#include "graphctl/xprec.hpp"

#include <cmath>

namespace graphctl {

XMatrix cholesky(const XMatrix& g) {
  const int n = g.rows();
  XMatrix l(n, n);
  for (int j = 0; j < n; ++j) {
    xreal d = g(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= 0) {
      fail(ErrorCode::IllConditioned,
           "Cholesky pivot " + std::to_string(j) + " is not positive");
    }
    l(j, j) = sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      xreal s = g(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

xvec forward_solve(const XMatrix& l, const xvec& b) {
  const int n = l.rows();
  xvec x(b);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) x[i] -= l(i, k) * x[k];
    x[i] /= l(i, i);
  }
  return x;
}

xvec backward_solve_t(const XMatrix& l, const xvec& b) {
  const int n = l.rows();
  xvec x(b);
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) x[i] -= l(k, i) * x[k];
    x[i] /= l(i, i);
  }
  return x;
}

xvec cholesky_solve(const XMatrix& l, const xvec& b) {
  return backward_solve_t(l, forward_solve(l, b));
}

xvec matvec(const XMatrix& a, const xvec& x) {
  xvec y(a.rows(), xreal(0));
  for (int i = 0; i < a.rows(); ++i) {
    xreal s = 0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

xreal dot(const xvec& a, const xvec& b) {
  xreal s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

xreal norm(const xvec& a) { return sqrt(dot(a, a)); }

xreal largest_singular_value(const XMatrix& a) {
  const int n = a.cols();
  if (n == 0) return 0;
  // Power iteration on A^T A with a deterministic, mildly uneven start so we
  // do not begin orthogonal to the top singular vector.
  xvec v(n);
  for (int i = 0; i < n; ++i) v[i] = xreal(1) + xreal(i) / (2 * n);
  xreal nv = norm(v);
  for (int i = 0; i < n; ++i) v[i] /= nv;
  xreal sigma = 0;
  for (int it = 0; it < 300; ++it) {
    // w = A v
    xvec w(a.rows(), xreal(0));
    for (int i = 0; i < a.rows(); ++i) {
      xreal s = 0;
      for (int j = 0; j < n; ++j) s += a(i, j) * v[j];
      w[i] = s;
    }
    // z = A^T w
    xvec z(n, xreal(0));
    for (int j = 0; j < n; ++j) {
      xreal s = 0;
      for (int i = 0; i < a.rows(); ++i) s += a(i, j) * w[i];
      z[j] = s;
    }
    xreal nz = norm(z);
    if (nz == 0) return 0;
    xreal next = sqrt(nz);
    for (int j = 0; j < n; ++j) v[j] = z[j] / nz;
    if (it > 20 && abs(next - sigma) <= next * xreal("1e-30")) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

}  // namespace graphctl
