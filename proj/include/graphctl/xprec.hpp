#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <vector>

#include "graphctl/errors.hpp"

namespace graphctl {

// Software floating point with 400 decimal digits. The moment problems solved
// here have Gram condition numbers like e^{c sqrt(lambda_N)} and residual
// checks that multiply by e^{lambda_N T}; 400 digits leaves roughly 250 digits
// of headroom for the steepest acceptance scenario (interval spectrum, N = 8,
// T = 0.5, lambda_N T ~ 316).
using xreal = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<400>>;

inline double to_double(const xreal& v) { return v.convert_to<double>(); }

using xvec = std::vector<xreal>;

// Minimal dense row-major matrix for the small (N <= 40) multiprecision
// systems. Deliberately no expression templates, no views: the sizes involved
// make clarity worth more than allocation counts.
class XMatrix {
 public:
  XMatrix() = default;
  XMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, xreal(0)) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  xreal& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const xreal& operator()(int i, int j) const {
    return a_[static_cast<size_t>(i) * cols_ + j];
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  xvec a_;
};

// Cholesky factor L (lower triangular) of a symmetric positive definite
// matrix. Throws IllConditioned on a nonpositive pivot.
XMatrix cholesky(const XMatrix& g);

// Solve L y = b (forward) and L^T x = y (backward); together G x = b.
xvec forward_solve(const XMatrix& l, const xvec& b);
xvec backward_solve_t(const XMatrix& l, const xvec& b);
xvec cholesky_solve(const XMatrix& l, const xvec& b);

xvec matvec(const XMatrix& a, const xvec& x);
xreal dot(const xvec& a, const xvec& b);
xreal norm(const xvec& a);

// Largest singular value of A by power iteration on A^T A (deterministic
// start vector, fixed iteration budget — plenty for the well-separated
// spectra met here).
xreal largest_singular_value(const XMatrix& a);

}  // namespace graphctl
