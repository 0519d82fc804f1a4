#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "lstail/special.hpp"

namespace lstail {

struct QuadResult {
  cplx value;
  double err_estimate;
  int evaluations;
};

// Adaptive Gauss-Kronrod (G7,K15) on [a,b].  Splits the worst panel until the
// summed error estimate meets abs_tol + rel_tol*|I|.  Throws AccuracyError if
// the panel budget runs out.
QuadResult integrate(const std::function<cplx(double)>& f, double a, double b,
                     double rel_tol = 1e-10, double abs_tol = 0.0,
                     int max_panels = 4000);

// Same, with interior breakpoints the integrand is not smooth across.
QuadResult integrate_split(const std::function<cplx(double)>& f,
                           const std::vector<double>& points,
                           double rel_tol = 1e-10, double abs_tol = 0.0,
                           int max_panels = 4000);

// integral_a^inf on geometric panels [a, 2a, 4a, ...]; stops when the
// caller-supplied bound on the remaining tail drops below tolerance.
// tail_bound(T) must dominate |integral_T^inf f|.
QuadResult integrate_tail(const std::function<cplx(double)>& f, double a,
                          const std::function<double(double)>& tail_bound,
                          double rel_tol = 1e-10, double abs_tol = 0.0);

// Filon-type oscillatory integral: integral f(t) e^{i theta t} dt over the
// uniform grid t_j = a + j*h carrying samples f_j (j = 0..n-1).  Piecewise
// cubic Hermite interpolation of f, exact moments of u^k e^{i theta u} per
// cell (series branch for small |theta h|), so accuracy is independent of how
// fast the exponential oscillates.
cplx filon_integral(double a, double h, const std::vector<cplx>& f, double theta);

// In-place radix-2 complex FFT (forward: sum_j x_j e^{-2pi i jk/n}).  n must
// be a power of two.
void fft_radix2(std::vector<cplx>& x);

// Ordinary least squares y ~ X b; returns coefficients.  Columns are scaled
// internally; cond_limit guards the scaled condition number.
std::vector<double> least_squares(const std::vector<std::vector<double>>& columns,
                                  const std::vector<double>& y,
                                  double* residual_out = nullptr,
                                  double cond_limit = 1e12);

// Solve the L x L system M d = rhs by partially pivoted LU.
std::vector<double> solve_dense(const std::vector<std::vector<double>>& rows,
                                const std::vector<double>& rhs);

}  // namespace lstail
