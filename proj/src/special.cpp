#include "lstail/special.hpp"

#include <cmath>

#include "lstail/error.hpp"

namespace lstail {

double nsinc(double x) {
  double px = kPi * x;
  if (std::abs(px) < 1e-4) {
    double p2 = px * px;
    return 1.0 - p2 / 6.0 + p2 * p2 / 120.0;
  }
  return std::sin(px) / px;
}

double q2fun(double x) {
  // sin^2(pi x)/(pi x) = pi x * nsinc(x)^2, zero at x = 0
  double v = nsinc(x);
  return kPi * x * v * v;
}

double trigamma(double x) {
  if (!(x > 0.0)) throw DomainError("trigamma: x must be positive");
  double acc = 0.0;
  while (x < 8.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  // asymptotic series with Bernoulli coefficients
  double inv = 1.0 / x, inv2 = inv * inv;
  double s = inv + 0.5 * inv2 +
             inv2 * inv * (1.0 / 6.0 + inv2 * (-1.0 / 30.0 + inv2 * (1.0 / 42.0 + inv2 * (-1.0 / 30.0 + inv2 * (5.0 / 66.0)))));
  return acc + s;
}

double zeta(double a) {
  if (a == 1.0) throw DomainError("zeta: pole at 1");
  return std::riemann_zeta(a);
}

double harmonic(int n) {
  double h = 0.0;
  for (int k = 1; k <= n; ++k) h += 1.0 / k;
  return h;
}

namespace {

// Upper incomplete gamma CF (modified Lentz): Gamma(a, z) = e^{-z} z^a / cf,
// cf = z + 1 - a - 1(1-a)/(z + 3 - a - 2(2-a)/(z + 5 - a - ...)).
// Returns cf denominator so E_nu avoids the z^a factor entirely.
cplx incgamma_cf_denominator(double a, cplx z) {
  const double tiny = 1e-300;
  cplx b = z + 1.0 - a;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i <= 400; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    cplx del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) return 1.0 / h;
  }
  throw AccuracyError("incomplete gamma continued fraction did not converge");
}

cplx exp_integral_e1_series(cplx s) {
  // E_1(s) = -gamma - log s + sum_{k>=1} (-1)^{k+1} s^k/(k k!)
  cplx sum = 0.0, term = 1.0;
  for (int k = 1; k <= 60; ++k) {
    term *= -s / static_cast<double>(k);
    cplx add = -term / static_cast<double>(k);
    sum += add;
    if (std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
  }
  return -kEulerGamma - std::log(s) + sum;
}

cplx exp_integral_e_series_noninteger(double nu, cplx s) {
  // E_nu(s) = Gamma(1-nu) s^{nu-1} - sum_{k>=0} (-s)^k / (k! (1 - nu + k))
  cplx sum = 0.0, term = 1.0;  // term = (-s)^k / k!
  for (int k = 0; k <= 80; ++k) {
    cplx add = term / (1.0 - nu + static_cast<double>(k));
    sum += add;
    if (k > 4 && std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
    term *= -s / static_cast<double>(k + 1);
  }
  return std::tgamma(1.0 - nu) * pow_principal(s, nu - 1.0) - sum;
}

}  // namespace

cplx exp_integral_e(double nu, cplx s) {
  if (!(nu > 0.0)) throw DomainError("exp_integral_e: nu must be positive");
  if (s == 0.0) throw DomainError("exp_integral_e: s = 0");
  if (s.real() < 0.0) throw DomainError("exp_integral_e: need Re s >= 0");
  bool integral_order = std::abs(nu - std::round(nu)) < 1e-12;
  if (std::abs(s) > 2.0) {
    // E_nu(s) = s^{nu-1} Gamma(1-nu, s) = e^{-s}/cf  (the powers cancel)
    return std::exp(-s) / incgamma_cf_denominator(1.0 - nu, s);
  }
  if (!integral_order) return exp_integral_e_series_noninteger(nu, s);
  int n = static_cast<int>(std::lround(nu));
  cplx e = exp_integral_e1_series(s);
  cplx es = std::exp(-s);
  for (int m = 1; m < n; ++m) e = (es - s * e) / static_cast<double>(m);
  return e;
}

cplx extrapolate_to_zero(const std::vector<double>& h, const std::vector<cplx>& f) {
  // Neville tableau at 0
  std::vector<cplx> p = f;
  std::size_t n = h.size();
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = 0; i + level < n; ++i)
      p[i] = (h[i + level] * p[i] - h[i] * p[i + 1]) / (h[i + level] - h[i]);
  return p[0];
}

double extrapolate_to_zero(const std::vector<double>& h, const std::vector<double>& f) {
  std::vector<cplx> fc(f.begin(), f.end());
  return extrapolate_to_zero(h, fc).real();
}

}  // namespace lstail
