#include "lstail/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lstail/error.hpp"
#include "lstail/transform.hpp"

namespace lstail {

namespace {

// Li_r(e^{-s}) for integer r >= 1, |s| < 2 pi, s != 0:
//   (-s)^{r-1}/(r-1)! (H_{r-1} - log s) + sum_{k != r-1} zeta(r-k) (-s)^k / k!
cplx polylog_exp_neg(int r, cplx s) {
  cplx log_term = std::pow(-s, r - 1) / std::tgamma(static_cast<double>(r)) *
                  (harmonic(r - 1) - log_principal(s));
  cplx sum = 0.0;
  cplx term = 1.0;  // (-s)^k / k!
  double prev = 1.0;
  for (int k = 0; k < 220; ++k) {
    if (k != r - 1) {
      cplx contrib = zeta(static_cast<double>(r - k)) * term;
      sum += contrib;
      double a = std::abs(contrib);
      // zeta vanishes at negative even integers, so a single small term proves
      // nothing; stop only once two consecutive terms are negligible
      if (k > r + 4 && a + prev < 1e-18 * (1.0 + std::abs(sum))) break;
      prev = a;
    }
    term *= -s / static_cast<double>(k + 1);
  }
  return log_term + sum;
}

}  // namespace

double Distribution::tail(double x) const {
  if (kind == Kind::pareto) {
    if (x <= 1.0) return 1.0;
    return std::pow(x, -r);
  }
  if (x < 0.0) return 1.0;
  double n = std::floor(x);
  return std::pow(n + 2.0, -r);
}

double Distribution::density(double x) const {
  if (kind != Kind::pareto) throw DomainError("density: discrete member has none");
  if (x < 1.0) return 0.0;
  return r * std::pow(x, -(r + 1.0));
}

double Distribution::pmf(std::int64_t n) const {
  if (kind != Kind::zeta_diff) throw DomainError("pmf: continuous member has none");
  if (n < 0) return 0.0;
  double a = static_cast<double>(n);
  return std::pow(a + 1.0, -r) - std::pow(a + 2.0, -r);
}

double Distribution::mean() const {
  if (r <= 1.0) throw DomainError("mean: infinite for tail exponent <= 1");
  if (kind == Kind::pareto) return r / (r - 1.0);
  return zeta(r) - 1.0;
}

double Distribution::quantile(double u) const {
  if (u < 0.0 || u >= 1.0) throw DomainError("quantile: u must lie in [0, 1)");
  if (kind == Kind::pareto) return std::pow(1.0 - u, -1.0 / r);
  // smallest n with CDF(n) > u, i.e. (n+2)^{-r} < 1-u
  double y = std::pow(1.0 - u, -1.0 / r) - 2.0;
  std::int64_t n = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(y)) + 1);
  while (n > 0 && std::pow(static_cast<double>(n) + 1.0, -r) < 1.0 - u) --n;
  while (!(std::pow(static_cast<double>(n) + 2.0, -r) < 1.0 - u)) ++n;
  return static_cast<double>(n);
}

cplx Distribution::phi_exact(cplx s) const {
  if (s == cplx(0.0)) return 1.0;
  if (s.real() < 0.0) throw DomainError("phi_exact: Re s < 0");
  if (kind == Kind::pareto) return r * exp_integral_e(r + 1.0, s);

  int ri = static_cast<int>(std::lround(r));
  // the support lives on the unit lattice, so phi is exactly 2 pi i periodic;
  // folding Im s into [-pi, pi] keeps every axis point inside the polylog radius
  s = cplx(s.real(), std::remainder(s.imag(), 2.0 * kPi));
  if (std::abs(s) < 4.5) {
    cplx es = std::exp(s);
    return (es - es * es) * polylog_exp_neg(ri, s) + es;
  }
  // direct partial summation; remainder bounded by |z|^{N+1} (N+2)^{-r}
  cplx z = std::exp(-s);
  double az = std::abs(z);
  if (az >= 1.0 && std::abs(s.real()) < 1e-300)
    throw AccuracyError("phi_exact: partial summation needs Re s > 0 at this |s|");
  cplx sum = 0.0, zn = 1.0;
  for (std::int64_t n = 0; n < 2000000; ++n) {
    sum += pmf(n) * zn;
    zn *= z;
    double rem = std::pow(az, static_cast<double>(n + 1)) *
                 std::pow(static_cast<double>(n) + 2.0, -r);
    if (rem < 1e-14) return sum;
  }
  throw AccuracyError("phi_exact: partial summation did not converge");
}

SingularityForm Distribution::known_singularity(int n_alpha, int n_beta) const {
  if (n_alpha < 1 || n_beta < 0) throw DomainError("known_singularity: bad sizes");
  SingularityForm form;
  form.r = r;
  form.alpha.assign(n_alpha, 0.0);
  form.beta.assign(n_beta, 0.0);

  if (kind == Kind::pareto) {
    bool integer_r = std::abs(r - std::round(r)) < 1e-12;
    if (integer_r) {
      int ri = static_cast<int>(std::lround(r));
      form.kind = SingularityForm::Kind::power_log;
      form.alpha[0] = r * power_log_coefficient(ri);
      for (int n = 0; n < n_beta; ++n) {
        if (n == ri) {
          double digamma = -kEulerGamma + harmonic(ri);
          form.beta[n] = r * ((ri % 2 == 0) ? 1.0 : -1.0) * digamma / std::tgamma(r + 1.0);
        } else {
          double sgn = (n % 2 == 0) ? -1.0 : 1.0;
          form.beta[n] = r * sgn / (std::tgamma(n + 1.0) * (n - r));
        }
      }
    } else {
      form.kind = SingularityForm::Kind::pure_power;
      form.alpha[0] = r * pure_power_coefficient(r);
      for (int n = 0; n < n_beta; ++n) {
        double sgn = (n % 2 == 0) ? -1.0 : 1.0;
        form.beta[n] = r * sgn / (std::tgamma(n + 1.0) * (n - r));
      }
    }
    return form;
  }

  // phi = (e^s - e^{2s}) Li_r(e^{-s}) + e^s around s = 0
  int ri = static_cast<int>(std::lround(r));
  form.kind = SingularityForm::Kind::power_log;
  double fact = std::tgamma(static_cast<double>(ri));  // (r-1)!
  double sign = (ri % 2 == 0) ? -1.0 : 1.0;            // (-1)^{r+1}
  for (int k = 0; k < n_alpha; ++k)
    form.alpha[k] = sign / fact * (std::pow(2.0, k + 1) - 1.0) / std::tgamma(k + 2.0);

  // analytic factor A of Li_r(e^{-s}) = A(s) - (-1)^{r-1} s^{r-1}/(r-1)! log s
  std::vector<double> A(static_cast<std::size_t>(std::max(n_beta, 1)), 0.0);
  for (int j = 0; j < n_beta; ++j) {
    if (j == ri - 1)
      A[j] = ((j % 2 == 0) ? 1.0 : -1.0) * harmonic(ri - 1) / fact;
    else
      A[j] = zeta(static_cast<double>(ri - j)) * ((j % 2 == 0) ? 1.0 : -1.0) /
             std::tgamma(j + 1.0);
  }
  for (int n = 0; n < n_beta; ++n) {
    double v = 1.0 / std::tgamma(n + 1.0);  // e^s coefficient
    for (int m = 0; m <= n; ++m)
      v += (1.0 - std::pow(2.0, m)) / std::tgamma(m + 1.0) * A[n - m];
    form.beta[n] = v;
  }
  return form;
}

Distribution make_pareto(double r) {
  if (!(r > 0.0)) throw DomainError("pareto: tail exponent must be positive");
  return {Distribution::Kind::pareto, r};
}

Distribution make_zeta_difference(int r) {
  if (r < 1) throw DomainError("zeta_diff: tail exponent must be a positive integer");
  return {Distribution::Kind::zeta_diff, static_cast<double>(r)};
}

std::vector<double> sample(const Distribution& dist, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    out.push_back(dist.quantile(u));
  }
  return out;
}

double empirical_tail(const std::vector<double>& draws, double x) {
  if (draws.empty()) throw DomainError("empirical_tail: no draws");
  std::size_t hits = 0;
  for (double d : draws)
    if (d > x) ++hits;
  return static_cast<double>(hits) / static_cast<double>(draws.size());
}

std::vector<double> zeta_diff_pmf_table(int r, std::size_t n) {
  Distribution d = make_zeta_difference(r);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(d.pmf(static_cast<std::int64_t>(i)));
  return out;
}

}  // namespace lstail
