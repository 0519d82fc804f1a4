#pragma once

#include <functional>
#include <span>
#include <vector>

#include "lstail/distribution.hpp"
#include "lstail/special.hpp"

namespace lstail {

// Singular behaviour of a Laplace-Stieltjes transform at s = 0:
//   power_log  : phi(s) = alpha(s) s^r log s + beta(s), r a positive integer
//   pure_power : phi(s) = alpha(s) s^r + beta(s),       r positive non-integer
// alpha/beta hold the leading Taylor coefficients of the two analytic factors.
struct SingularityForm {
  enum class Kind { power_log, pure_power };

  Kind kind{Kind::power_log};
  double r{1.0};
  std::vector<double> alpha;
  std::vector<double> beta;

  int r_floor() const;           // floor(r); equals r for power_log
  double r_frac() const;         // r - floor(r), in (0,1) for pure_power
  cplx singular_part(cplx s) const;  // sum_k alpha_k * (canonical term at r+k)
};

// phi(s) by adaptive quadrature against the catalog density / pmf.
// Re s > 0, or Re s = 0 with |s| != 0 (then the polynomial tail alone must
// control truncation).  rel_tol is the target relative accuracy.
cplx phi_quadrature(const Distribution& dist, cplx s, double rel_tol = 1e-10);

// Singular part of L(t^{-(r+1)} 1_{t>=1})(s) for integer r >= 1:
// c_r s^r log s with c_r = (-1)^{r+1}/r!.
double power_log_coefficient(int r);
cplx canonical_power_log(int r, cplx s);

// Same for non-integer r > 0: a_r s^r with
// a_r = (-1)^{floor(r)+1} pi / (Gamma(r+1) sin(pi (r-floor(r)))) = Gamma(-r).
double pure_power_coefficient(double r);
cplx canonical_pure_power(double r, cplx s);

// p(e^{-s}) for a probability coefficient sequence; partial summation with the
// remaining-mass tail bound.  Throws if the coefficients sum above 1 + 1e-9 or
// the bound cannot meet rel_tol.
cplx pgf_to_ls(std::span<const double> probs, cplx s, double rel_tol = 1e-10);

struct FitSample {
  double s;
  double value;
};

struct FitResult {
  SingularityForm form;
  double residual;            // rms residual of the winning model
  double runner_up_r;
  double runner_up_residual;
};

// Least-squares competition between candidate exponents.  Model per candidate:
// alpha_0 * (s^r log s | s^r) + polynomial of degree order-1.  Winner by
// residual; a runner-up within a factor 2 raises AmbiguityError.
FitResult fit_singularity(const std::vector<FitSample>& samples,
                          const std::vector<double>& r_candidates,
                          int order);

// Parity law for the leading coefficient: power_log passes iff
// sign(alpha_0) = (-1)^{r+1}; pure_power iff sign(alpha_0) = (-1)^{floor(r)+1}.
bool sign_check(const SingularityForm& form);

}  // namespace lstail
