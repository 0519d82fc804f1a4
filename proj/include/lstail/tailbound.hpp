#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lstail/correction.hpp"
#include "lstail/distribution.hpp"

namespace lstail {

struct BoundSettings {
  int L{2};                 // majorant order; the minorant side uses the
                            // smallest odd value >= L
  // Explicit band width.  <= 0 picks a per-side width automatically: the
  // envelope overshoot costs about (2 pi / delta) * overshoot_mass * r in units
  // of the tail, so delta is sized to keep that near 1, capped for lattice
  // members so L*delta stays clear of the transform's 2 pi replica singularity.
  double delta{0.0};
  // Tilt schedule for diagnostics (tilted_mass); the bound itself uses the
  // vanishing-tilt envelope in closed form, since any fixed positive tilt
  // biases by a factor controlled by sigma2*x and no x-independent schedule
  // extrapolates that away over the whole window.
  std::vector<double> sigma2{1e-2, 1e-3, 1e-4};
  // Floor on the relative target for the time-domain mass integrals.  The
  // effective target is relaxed toward 1e-3 of the envelope slack scale
  // 2pi/(delta x): the slow 1/u^2 ripple of the limit envelope would otherwise
  // demand per-period panels out to u ~ 1/(tol x).
  double quad_rel_tol{1e-7};
  int tau_points_per_cell{48};  // product-cache sampling per delta subinterval
};

struct DecayFit {
  double slope;
  double std_error;
  int points_used;
};

// Log-log slope over the top decade [x_max/10, x_max] (widened to two decades
// if fewer than three points land there).  Requires >= 10 points spanning >= 2
// decades overall, positive p.
DecayFit decay_rate_estimate(std::span<const double> x, std::span<const double> p);

struct BoundReport {
  std::vector<double> x;
  std::vector<double> lower, upper, tail_exact;
  std::vector<double> scaled_lower, scaled_upper;  // bound * x^r
  double r_used{0.0};
  double eta_lower{0.0}, eta_upper{0.0}, eta_exact{0.0};
  double fit_alpha0{0.0};
  double fit_residual{0.0};
  bool sign_check_passed{false};
  bool sandwich_ok{false};
  std::string notes;
};

// Two-sided bound engine for one (distribution, pair, settings) triple.
// Caches the x-independent frequency product hat(-tau) xi(i tau) on a
// per-subinterval polynomial grid; each bound evaluation is then one tilt
// integral plus one Filon pass.
class BoundEngine {
 public:
  BoundEngine(const Distribution& dist, const CorrectionPair& pair,
              const BoundSettings& settings);

  // Upper bound on P(X > x):
  //   T1 = integral M0^L(delta (t - x)/2pi) f*(t) dt
  //   T2 = (1/2pi) integral_{-L delta}^{L delta} hat(-tau) xi(i tau) e^{i x tau} dtau
  // where M0 is the vanishing-tilt majorant of the unit step, so both terms
  // live at the tilt limit.  Lower bound likewise from the odd-order minorant.
  double upper(double x) const;
  double lower(double x) const;

  // Tilted time-domain mass integral M^L_{sigma2,delta}(t - x) f*(t) dt, the
  // finite-tilt counterpart of T1; approaches it from below as sigma2 -> 0.
  double tilted_mass(double x, double sigma2, bool minor = false) const;

  const CorrectionPair& pair() const { return pair_; }
  int upper_order() const { return L_up_; }
  int lower_order() const { return L_low_; }
  double upper_delta() const { return delta_up_; }
  double lower_delta() const { return delta_low_; }

 private:
  struct FreqCache {
    double lim;           // L*delta
    std::vector<double> tau;    // fine grid on [0, L delta]
    // hat(-tau) xi(i tau) minus the kink model below, which restores the
    // genuine |v| + v ln|v| kink of the transform at v = tau - delta:
    //   model(tau) = (kp |v| + kq v ln|v|) (xi0 + xi1 v + xi2 v^2)
    std::vector<cplx> product;
    double kp{0.0};
    cplx kq{0.0};
    cplx xi0{0.0}, xi1{0.0}, xi2{0.0};
  };

  double resolve_delta(int L, bool minor) const;
  double side(double x, bool minor) const;
  double t1(double x, bool minor) const;
  double t2(double x, bool minor) const;
  FreqCache build_cache(int L, bool minor) const;

  Distribution dist_;
  CorrectionPair pair_;
  BoundSettings set_;
  int L_up_, L_low_;
  double delta_up_, delta_low_;
  FreqCache up_cache_, low_cache_;
};

// Full pipeline: sample phi on a real window, fit the singularity against the
// candidate grid, parity-check it, build the correction pair, run two-sided
// bounds over a log-spaced x grid, and estimate decay rates of both bounds and
// the exact tail.
BoundReport theorem_check(const Distribution& dist, int L, double x_lo, double x_hi,
                          int points = 25, const BoundSettings* settings = nullptr,
                          bool use_exact_form = false);

// Boundedness checks for the two kernel integrals that control the error
// terms.  Values are already scaled by the advertised rate:
//   a1: x^{min(n1,n2)} integral_1^{x-1} (x-t)^{-n1} t^{-n2} dt      (bounded)
//   a2: x^{n}          integral_0^{x-1} e^{-k t} (x-t)^{-n} dt  ->  1/k
std::vector<std::pair<double, double>> appendix_a1(double n1, double n2,
                                                   std::span<const double> xs);
std::vector<std::pair<double, double>> appendix_a2(double k, double n,
                                                   std::span<const double> xs);

// Slowly-decaying regime cross-check for 0 < r < 1: both
//   left(x)  = (F(x) - 1)/x^{-r}
//   right(x) = (phi(1/x) - 1)/(x^{-r} Gamma(1-r))
// converge to the same constant.
struct KorevaarPoint {
  double x, left, right;
};
std::vector<KorevaarPoint> korevaar_check(const Distribution& dist,
                                          std::span<const double> xs);

}  // namespace lstail
