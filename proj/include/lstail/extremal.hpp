#pragma once

#include <span>
#include <vector>

#include "lstail/special.hpp"

namespace lstail {

// Uniform complex-valued grid samples of a function of one real variable.
struct GridFunction {
  double start{0.0};
  double step{1.0};
  std::vector<cplx> values;

  double end() const { return start + step * (values.empty() ? 0 : values.size() - 1); }
  // Cubic interpolation (one-sided at the ends); t must lie inside the grid.
  cplx value_at(double t) const;
};

// One-sided exponential e^{-omega t} 1_{t >= 0}.
double indicator_exp(double omega, double t);

// Entire majorant/minorant of indicator_exp of exponential type 2pi:
//   M(t) = sum_{n>=0} e^{-n omega} nsinc^2(t-n)
//          - (omega/pi) sum_{n>=1} e^{-n omega} (q2fun(t-n) - q2fun(t))
//   m(t) = M(t) - nsinc^2(t)
// written termwise in the forms above so every removable singularity at an
// integer is evaluated through its limit.  Series truncated by the geometric
// tail bound; abs_tol is the truncation target.
double majorant1(double omega, double t, double abs_tol = 1e-13);
double minorant1(double omega, double t, double abs_tol = 1e-13);

// Rescaled L-th powers: M^L_{sigma,delta}(t) = majorant1(2 pi sigma/delta,
// delta t/(2 pi))^L sandwiches e^{-L sigma t} 1_{t>=0} from above; the
// minorant version requires odd L (DomainError otherwise).
double majorant(int L, double sigma, double delta, double t, double abs_tol = 1e-13);
double minorant(int L, double sigma, double delta, double t, double abs_tol = 1e-13);

// Fourier data, convention F(f)(tau) = integral f(t) e^{-i tau t} dt.
// hat_q1 is the triangle 1 - |tau|/2pi on [-2pi, 2pi]; hat_q2 is i/2 on
// [-2pi, 0) and -i/2 on [0, 2pi).  Values at the jump points follow those
// half-open brackets.
double hat_q1(double tau);
cplx hat_q2(double tau);

// Closed forms for the transforms of majorant1/minorant1 (compact support
// [-2pi, 2pi]):
//   hat_M(tau) = hat_q1/(1-e^{-(omega+i tau)})
//                - (omega/pi) (1/(1-e^{-(omega+i tau)}) - 1/(1-e^{-omega})) hat_q2
//   hat_m(tau) = e^{-(omega+i tau)}/(1-e^{-(omega+i tau)}) hat_q1
//                - (omega/pi) (1/(1-e^{-(omega+i tau)}) - 1/(1-e^{-omega})) hat_q2
double hat_m1_total_mass(double omega);  // hat at tau=0 shortcut, e^-w/(1-e^-w)
cplx hat_majorant1(double omega, double tau);
cplx hat_minorant1(double omega, double tau);

// Transform of the L-th power of the rescaled majorant/minorant, evaluated on
// the requested tau points (support [-L delta, L delta]).  Computed on a
// uniform grid in the unscaled variable theta = 2 pi tau/delta: the factor
// transform hat_majorant1/hat_minorant1 is sampled (midpoint values at its
// jump points, so trapezoid sums see the true Fourier data) and convolved with
// itself L-1 times, with prefactor (2 pi)^{-(L-1)}.  omega must exceed a few
// grid steps so the 1/(omega + i theta) peak is resolved (AccuracyError
// otherwise).
std::vector<cplx> hat_power(int L, double sigma, double delta,
                            std::span<const double> taus, bool minor,
                            double theta_step = 2.0 * kPi / 1024.0);

// Same value at a single tau by nested adaptive convolution of the closed-form
// factor transforms (no grid); usable at arbitrarily small sigma.  L <= 3.
cplx hat_power_pointwise(int L, double sigma, double delta, double tau, bool minor,
                         double rel_tol = 1e-6);

// Pointwise sigma -> 0+ limits of majorant1/minorant1: the sharp envelopes of
// the unit step,
//   M0(t) = 1 - (sin^2(pi t)/pi^2)(psi'(t+1) - 1/t)
// (minorant: psi'(t) in place of psi'(t+1)), extended by the reflection forms
// for t < 0.  O(1) per evaluation.
double majorant_limit(double t);
double minorant_limit(double t);

// sigma -> 0+ limit of hat_power at fixed delta, tau != 0 (DomainError at 0).
// Computed in the time domain: (majorant_limit)^L minus the unit step is
// integrable, its transform comes from one FFT with the t=0 jump subtracted
// analytically, and the step contributes 1/(i theta).  Result cached per
// (L, minor) across calls.
cplx hat_limit(int L, double delta, double tau, bool minor);

// The slow 1/u^2 envelope ripple leaves hat_limit with a genuine kink at the
// replica frequency theta = 2 pi (theta = 2 pi |tau| / delta):
//   F(env^L - step)(2 pi + v) = smooth + abs_part |v| + i log_part v ln|v|.
// Quadrature and interpolation layers that cannot absorb a kink subtract this
// model and restore its exact transform separately.
struct LimitKink {
  double abs_part;
  double log_part;
};
LimitKink limit_kink(int L, bool minor);

// Interpolation checks: majorant1 reproduces e^{-n omega} at integers n >= 0
// and 0 at negative integers (used by tests and the verification CLI).
double majorant1_node_value(double omega, long long n);

}  // namespace lstail
