#pragma once

#include <functional>
#include <span>
#include <vector>

#include "lstail/transform.hpp"

namespace lstail {

// Comparison pair (g*, h*) matched to a singularity form of order L:
//   g*(t) = sum_{k<L} g_k t^{-(r+k+1)} 1_{t>=1}   reproduces the singular part,
//   h*(t) = sum_{k=1..L} d_k k e^{-k t}           repairs the Taylor mismatch,
// so xi(s) = phi(s) - G*(s) - H*(s) vanishes to order L at s = 0.
struct CorrectionPair {
  SingularityForm form;
  int L{1};
  std::vector<double> g;           // g_0 .. g_{L-1}
  std::vector<double> tilde_beta;  // Taylor of G* minus its singular part, L terms
  std::vector<double> d;           // d_1 .. d_L (stored from index 0)
};

// Power-kernel coefficients.  power_log: g_k = (-1)^{r+k+1} (r+k)! alpha_k;
// pure_power: g_k = (-1)^{floor(r)+k+1} (sin(pi rbar)/pi) Gamma(r+k+1) alpha_k.
// Throws InvariantError unless g_0 > 0.
std::vector<double> g_coefficients(const SingularityForm& form, int L);

double g_star(const CorrectionPair& pair, double t);
double h_star(std::span<const double> d, double t);

// Transforms, both in closed form: G*(s) = sum_k g_k E_{r+k+1}(s) (each kernel
// term is literally the E_nu integral), H*(s) = sum d_k k/(s+k).  Valid for
// Re s >= 0 including the imaginary axis; rel_tol is accepted for interface
// stability and ignored.
cplx G_star(const CorrectionPair& pair, cplx s, double rel_tol = 1e-11);
cplx H_star(std::span<const double> d, cplx s);

// Taylor coefficients (L of them) of G* minus its singular part.  The constant
// term is the exact moment G*(0) = sum_k g_k/(r+k); the higher terms come from
// a polynomial fit of the remainder on a real s grid in [1e-3, 1e-1].  Pinning
// the constant makes xi(0) vanish exactly, which the frequency-side bound term
// needs: its integrand carries a 1/tau factor that any constant mismatch would
// turn into a pole.  Fit residual above 1e-6 raises AccuracyError.
std::vector<double> tilde_beta_coefficients(const SingularityForm& form,
                                            std::span<const double> g, int L);

// Solve sum_k d_k (-1/k)^m = rhs_m (m = 0..L-1); the Vandermonde rows are
// (1, -1/k, ..., (-1/k)^{L-1}).  Residual above 1e-10 raises AccuracyError.
std::vector<double> solve_h_coeffs(std::span<const double> beta,
                                   std::span<const double> tilde_beta);

CorrectionPair build_correction(const SingularityForm& form, int L);

// xi(s) = phi(s) - G*(s) - H*(s), anywhere in Re s >= 0 (the axis included;
// all three pieces are closed-form there).  Re s < 0: DomainError.
cplx xi(const std::function<cplx(cplx)>& phi, const CorrectionPair& pair, cplx s,
        double rel_tol = 1e-11);

}  // namespace lstail
