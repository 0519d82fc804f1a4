#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace lstail {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

// sin(pi x)/(pi x), equal to 1 at x = 0.  The removable singularity is handled
// by the small-|x| series so the extremal sums never cancel catastrophically.
double nsinc(double x);

// sin^2(pi x)/(pi x), equal to 0 at x = 0.
double q2fun(double x);

// trigamma psi'(x) for x > 0.
double trigamma(double x);

// Riemann zeta at real a != 1 (thin wrapper with the handful of exact values
// the polylog expansions need).
double zeta(double a);

double harmonic(int n);  // H_n, H_0 = 0

// E_nu(s) = integral_1^inf t^{-nu} e^{-st} dt for Re s > 0 (and the imaginary
// axis away from 0).  nu > 0, integer or not.  Series for small |s|, modified
// Lentz continued fraction otherwise.
cplx exp_integral_e(double nu, cplx s);

// Principal-branch log/power; all singular-part formulas use these.
inline cplx log_principal(cplx s) { return std::log(s); }
inline cplx pow_principal(cplx s, double r) { return std::exp(r * std::log(s)); }

// Limit-of-scheme extrapolation: given f(h_i) for a decreasing positive
// schedule h_i, Neville-extrapolate to h = 0.
cplx extrapolate_to_zero(const std::vector<double>& h, const std::vector<cplx>& f);
double extrapolate_to_zero(const std::vector<double>& h, const std::vector<double>& f);

}  // namespace lstail
