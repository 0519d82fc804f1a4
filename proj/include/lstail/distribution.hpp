#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lstail/special.hpp"

namespace lstail {

struct SingularityForm;

// Heavy-tailed catalog members.  Both have P(X > x) ~ x^{-r}.
//   pareto:    F(x) = 1 - x^{-r} on [1, inf), density r x^{-(r+1)}.
//   zeta_diff: pmf p_n = (n+1)^{-r} - (n+2)^{-r} on n = 0,1,2,...,
//              tail P(X > n) = (n+2)^{-r}; r a positive integer.
struct Distribution {
  enum class Kind { pareto, zeta_diff };

  Kind kind{Kind::pareto};
  double r{1.0};

  bool discrete() const { return kind == Kind::zeta_diff; }
  double support_start() const { return discrete() ? 0.0 : 1.0; }

  double tail(double x) const;        // P(X > x), right-continuous step for zeta_diff
  double cdf(double x) const { return 1.0 - tail(x); }
  double density(double x) const;     // pareto only
  double pmf(std::int64_t n) const;   // zeta_diff only
  double mean() const;                // finite only for r > 1; DomainError otherwise

  // Inverse-CDF draw from a uniform u in [0,1).  For zeta_diff this is the
  // smallest n with CDF(n) > u.
  double quantile(double u) const;

  // Exact transform phi(s) = E[e^{-sX}], Re s >= 0, s != 0.  Pareto goes
  // through E_{r+1}; zeta_diff folds Im s by its exact 2 pi periodicity and
  // goes through the polylog expansion, with partial summation as fallback at
  // large Re s.  This is the catalog's ground-truth hook;
  // the quadrature/pgf operations in the transform module are the
  // independently checked routes.
  cplx phi_exact(cplx s) const;

  // Exact singular decomposition phi = alpha(s) s^r log s + beta(s) (integer r)
  // or alpha(s) s^r + beta(s) (non-integer r), with n_alpha alpha-coefficients
  // and n_beta beta-coefficients.
  SingularityForm known_singularity(int n_alpha, int n_beta) const;

  std::string kind_name() const { return discrete() ? "zeta_diff" : "pareto"; }
};

Distribution make_pareto(double r);
Distribution make_zeta_difference(int r);

// count inverse-CDF draws; deterministic given seed (fixed 53-bit uniforms
// from mt19937_64, so results are platform independent).
std::vector<double> sample(const Distribution& dist, std::size_t count, std::uint64_t seed);

// Fraction of draws strictly greater than x.
double empirical_tail(const std::vector<double>& draws, double x);

// First zeta_diff pmf values p_0..p_{n-1}.
std::vector<double> zeta_diff_pmf_table(int r, std::size_t n);

}  // namespace lstail
