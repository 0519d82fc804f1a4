#include "lstail/extremal.hpp"

#include <gsl/gsl_sf_expint.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "lstail/error.hpp"
#include "lstail/quadrature.hpp"

namespace lstail {

cplx GridFunction::value_at(double t) const {
  if (values.size() < 4) throw DomainError("grid interpolation needs at least 4 nodes");
  double pos = (t - start) / step;
  double last = static_cast<double>(values.size() - 1);
  if (pos < -1e-9 || pos > last + 1e-9) throw DomainError("grid interpolation outside range");
  pos = std::clamp(pos, 0.0, last);
  long long i = static_cast<long long>(std::floor(pos)) - 1;
  i = std::clamp<long long>(i, 0, static_cast<long long>(values.size()) - 4);
  double x = pos - static_cast<double>(i);
  double w0 = -(x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0;
  double w1 = x * (x - 2.0) * (x - 3.0) / 2.0;
  double w2 = -x * (x - 1.0) * (x - 3.0) / 2.0;
  double w3 = x * (x - 1.0) * (x - 2.0) / 6.0;
  return w0 * values[i] + w1 * values[i + 1] + w2 * values[i + 2] + w3 * values[i + 3];
}

double indicator_exp(double omega, double t) {
  return t >= 0.0 ? std::exp(-omega * t) : 0.0;
}

namespace {

long long truncation_length(double omega, double abs_tol) {
  double q = std::exp(-omega);
  double head = (1.0 + 2.0 * omega) / ((1.0 - q) * abs_tol);
  long long n = static_cast<long long>(std::ceil(std::log(head) / omega)) + 2;
  if (n > 6000000) throw AccuracyError("extremal series: omega too small for termwise evaluation");
  return std::max<long long>(n, 8);
}

}  // namespace

double majorant1(double omega, double t, double abs_tol) {
  if (!(omega > 0.0)) throw DomainError("majorant1: omega must be positive");
  long long N = truncation_length(omega, abs_tol);
  double s = std::sin(kPi * t);
  double s2 = s * s;  // sin^2(pi(t-n)) for every integer shift n
  long long near = std::llround(t);
  double q = std::exp(-omega);
  double q2t = q2fun(t);
  double w = 1.0;
  double sum1 = 0.0, sum2 = 0.0;
  for (long long n = 0; n <= N; ++n) {
    if (n == near) {
      double v = nsinc(t - static_cast<double>(n));
      sum1 += w * v * v;
      if (n >= 1) sum2 += w * (q2fun(t - static_cast<double>(n)) - q2t);
    } else {
      double d = t - static_cast<double>(n);
      sum1 += w * s2 / (kPi * kPi * d * d);
      if (n >= 1) sum2 += w * (s2 / (kPi * d) - q2t);
    }
    w *= q;
  }
  return sum1 - (omega / kPi) * sum2;
}

double minorant1(double omega, double t, double abs_tol) {
  double v = nsinc(t);
  return majorant1(omega, t, abs_tol) - v * v;
}

double majorant(int L, double sigma, double delta, double t, double abs_tol) {
  if (L < 1) throw DomainError("majorant: L must be >= 1");
  if (!(sigma > 0.0) || !(delta > 0.0)) throw DomainError("majorant: sigma, delta must be positive");
  double u = delta * t / (2.0 * kPi);
  return std::pow(majorant1(2.0 * kPi * sigma / delta, u, abs_tol), L);
}

double minorant(int L, double sigma, double delta, double t, double abs_tol) {
  if (L < 1 || L % 2 == 0) throw DomainError("minorant: L must be odd");
  if (!(sigma > 0.0) || !(delta > 0.0)) throw DomainError("minorant: sigma, delta must be positive");
  double u = delta * t / (2.0 * kPi);
  double m = minorant1(2.0 * kPi * sigma / delta, u, abs_tol);
  return std::pow(m, L);
}

double hat_q1(double tau) {
  double a = std::abs(tau);
  return a >= 2.0 * kPi ? 0.0 : 1.0 - a / (2.0 * kPi);
}

cplx hat_q2(double tau) {
  if (tau < -2.0 * kPi || tau >= 2.0 * kPi) return 0.0;
  return tau < 0.0 ? cplx(0.0, 0.5) : cplx(0.0, -0.5);
}

double hat_m1_total_mass(double omega) {
  double q = std::exp(-omega);
  return q / (1.0 - q);
}

cplx hat_majorant1(double omega, double tau) {
  cplx inv = 1.0 / (1.0 - std::exp(-cplx(omega, tau)));
  double inv0 = 1.0 / (1.0 - std::exp(-omega));
  return hat_q1(tau) * inv - (omega / kPi) * (inv - inv0) * hat_q2(tau);
}

cplx hat_minorant1(double omega, double tau) {
  cplx x = std::exp(-cplx(omega, tau));
  cplx inv = 1.0 / (1.0 - x);
  double inv0 = 1.0 / (1.0 - std::exp(-omega));
  return hat_q1(tau) * x * inv - (omega / kPi) * (inv - inv0) * hat_q2(tau);
}

namespace {

// Fourier value at the jump points (midpoint of the one-sided limits); grid
// sampling must use this so node-aligned trapezoid sums stay second order.
cplx hat_q2_midpoint(double theta) {
  double a = std::abs(theta);
  if (a > 2.0 * kPi + 1e-12) return 0.0;
  if (a < 1e-12) return 0.0;
  if (std::abs(a - 2.0 * kPi) < 1e-12) return theta < 0.0 ? cplx(0.0, 0.25) : cplx(0.0, -0.25);
  return theta < 0.0 ? cplx(0.0, 0.5) : cplx(0.0, -0.5);
}

cplx hat_factor_midpoint(double omega, double theta, bool minor) {
  cplx x = std::exp(-cplx(omega, theta));
  cplx inv = 1.0 / (1.0 - x);
  double inv0 = 1.0 / (1.0 - std::exp(-omega));
  cplx lead = minor ? x * inv : inv;
  return hat_q1(theta) * lead - (omega / kPi) * (inv - inv0) * hat_q2_midpoint(theta);
}

// plain Riemann sum over aligned grids; with midpoint values at the jumps this
// is the trapezoid rule on each smooth piece.  Supports are symmetric, odd
// lengths, common step h.
std::vector<cplx> convolve(const std::vector<cplx>& a, const std::vector<cplx>& b, double h) {
  long long A = (static_cast<long long>(a.size()) - 1) / 2;
  long long B = (static_cast<long long>(b.size()) - 1) / 2;
  std::vector<cplx> out(a.size() + b.size() - 1, 0.0);
  for (long long k = -(A + B); k <= A + B; ++k) {
    cplx acc = 0.0;
    long long jlo = std::max(-A, k - B), jhi = std::min(A, k + B);
    for (long long j = jlo; j <= jhi; ++j) acc += a[j + A] * b[k - j + B];
    out[k + A + B] = acc * h;
  }
  return out;
}

}  // namespace

std::vector<cplx> hat_power(int L, double sigma, double delta, std::span<const double> taus,
                            bool minor, double theta_step) {
  if (L < 1) throw DomainError("hat_power: L must be >= 1");
  if (minor && L % 2 == 0) throw DomainError("hat_power: minorant needs odd L");
  if (!(sigma > 0.0) || !(delta > 0.0)) throw DomainError("hat_power: sigma, delta positive");
  double omega = 2.0 * kPi * sigma / delta;
  std::vector<cplx> out(taus.size());

  if (L == 1) {
    for (std::size_t i = 0; i < taus.size(); ++i) {
      double theta = 2.0 * kPi * taus[i] / delta;
      cplx v = minor ? hat_minorant1(omega, theta) : hat_majorant1(omega, theta);
      out[i] = (2.0 * kPi / delta) * v;
    }
    return out;
  }

  long long n_half = std::max<long long>(8, std::llround(2.0 * kPi / theta_step));
  double h = 2.0 * kPi / static_cast<double>(n_half);
  if (omega < 4.0 * h)
    throw AccuracyError("hat_power: grid cannot resolve the peak; reduce theta_step or use the pointwise route");

  std::vector<cplx> base(2 * n_half + 1);
  for (long long j = -n_half; j <= n_half; ++j)
    base[j + n_half] = hat_factor_midpoint(omega, h * static_cast<double>(j), minor);

  std::vector<cplx> acc = base;
  for (int l = 2; l <= L; ++l) acc = convolve(acc, base, h);

  GridFunction grid{-2.0 * kPi * L, h, std::move(acc)};
  double scale = (2.0 * kPi / delta) * std::pow(1.0 / (2.0 * kPi), L - 1);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    double theta = 2.0 * kPi * taus[i] / delta;
    if (std::abs(theta) >= 2.0 * kPi * L)
      out[i] = 0.0;
    else
      out[i] = scale * grid.value_at(theta);
  }
  return out;
}

namespace {

void push_peak_splits(std::vector<double>& pts, double center, double omega, double a, double b) {
  for (int k = 0; k <= 8; ++k) {
    double off = omega * std::pow(5.0, k);
    if (off > 4.0 * kPi) break;
    for (double c : {center - off, center + off})
      if (c > a && c < b) pts.push_back(c);
  }
}

}  // namespace

cplx hat_power_pointwise(int L, double sigma, double delta, double tau, bool minor,
                         double rel_tol) {
  if (L < 1 || L > 3) throw DomainError("hat_power_pointwise: L must be 1, 2 or 3");
  if (minor && L % 2 == 0) throw DomainError("hat_power_pointwise: minorant needs odd L");
  if (!(sigma > 0.0) || !(delta > 0.0))
    throw DomainError("hat_power_pointwise: sigma, delta positive");
  double omega = 2.0 * kPi * sigma / delta;
  double theta = 2.0 * kPi * tau / delta;
  auto factor = [&](double th) {
    return minor ? hat_minorant1(omega, th) : hat_majorant1(omega, th);
  };
  double outer_scale = 2.0 * kPi / delta;
  if (std::abs(theta) >= 2.0 * kPi * L) return 0.0;
  if (L == 1) return outer_scale * factor(theta);

  auto pair_conv = [&](double th, double tol) -> cplx {
    double a = std::max(-2.0 * kPi, th - 2.0 * kPi);
    double b = std::min(2.0 * kPi, th + 2.0 * kPi);
    if (!(a < b)) return 0.0;
    std::vector<double> pts = {a, b};
    for (double c : {0.0, th}) {
      if (c > a && c < b) pts.push_back(c);
      push_peak_splits(pts, c, omega, a, b);
    }
    push_peak_splits(pts, a, omega, a, b);
    push_peak_splits(pts, b, omega, a, b);
    auto f = [&](double phi) { return factor(phi) * factor(th - phi); };
    return integrate_split(f, pts, tol, tol * 1e-2, 20000).value;
  };

  if (L == 2) return outer_scale / (2.0 * kPi) * pair_conv(theta, rel_tol);

  double a = std::max(-4.0 * kPi, theta - 2.0 * kPi);
  double b = std::min(4.0 * kPi, theta + 2.0 * kPi);
  std::vector<double> pts = {a, b};
  for (double c : {-2.0 * kPi, 0.0, 2.0 * kPi, theta}) {
    if (c > a && c < b) pts.push_back(c);
    push_peak_splits(pts, c, omega, a, b);
  }
  auto f = [&](double phi) { return pair_conv(phi, rel_tol * 0.3) * factor(theta - phi); };
  cplx inner = integrate_split(f, pts, rel_tol, rel_tol * 1e-2, 20000).value;
  return outer_scale / std::pow(2.0 * kPi, 2) * inner;
}

namespace {

// sigma -> 0 pointwise limits of the unscaled majorant/minorant.
double limit_envelope(double t, bool minor) {
  double v = nsinc(t);
  double s2 = t * t * v * v;  // sin^2(pi t)/pi^2
  if (t > 0.0) {
    double tri = minor ? trigamma(t) : trigamma(t + 1.0);
    return 1.0 - s2 * (tri - 1.0 / t);
  }
  if (t < 0.0) {
    double tri = minor ? trigamma(1.0 - t) : trigamma(-t);
    return s2 * (tri + 1.0 / t);
  }
  return minor ? 0.0 : 1.0;
}

struct LimitTable {
  GridFunction grid;   // F(W)(theta) on theta >= 0
  double theta_max;
};

// integral_1^inf e^{-i theta u} u^{-2} du, elementary in Si/Ci
cplx half_inverse_square(double theta) {
  double x = std::abs(theta);
  double re = std::cos(x) - x * (kPi / 2.0 - gsl_sf_Si(x));
  double im = x > 0.0 ? std::sin(x) - x * gsl_sf_Ci(x) : 0.0;
  return {re, theta >= 0.0 ? -im : im};
}

// transform of the ripple (1 - cos 2 pi u) u^{-2} restricted to u >= 1
cplx ripple_transform(double theta) {
  return half_inverse_square(theta) - 0.5 * half_inverse_square(theta - 2.0 * kPi) -
         0.5 * half_inverse_square(theta + 2.0 * kPi);
}

// far-tail ripple amplitudes of env^L - step: cpos (1 - cos 2 pi u)/u^2 as
// u -> +inf, cneg likewise toward -inf (only first order survives there)
void ripple_amplitudes(int L, bool minor, double* cpos, double* cneg) {
  double sgn = minor ? -1.0 : 1.0;
  *cpos = sgn * static_cast<double>(L) / (4.0 * kPi * kPi);
  *cneg = L == 1 ? sgn / (4.0 * kPi * kPi) : 0.0;
}

const LimitTable& limit_table(int L, bool minor) {
  static std::map<std::pair<int, bool>, LimitTable> cache;
  auto it = cache.find({L, minor});
  if (it != cache.end()) return it->second;

  const double h = 1.0 / 64.0;
  const long long half = 1 << 18;       // +-4096 window
  const std::size_t P = std::size_t(1) << 20;
  // The envelopes approach the step like +-(1 - cos 2 pi u)/(4 pi^2 u^2); cut
  // at the window edge that slow ripple would leak ~1e-6 into every frequency
  // near 2 pi k.  Subtract it from u = 1 on and restore its exact transform.
  double cpos, cneg;
  ripple_amplitudes(L, minor, &cpos, &cneg);
  std::vector<cplx> a(P, 0.0);
  a[0] = minor ? 0.0 : 1.0;             // continuous value of W + step*e^{-t} at 0
  for (long long j = 1; j <= half; ++j) {
    double t = h * static_cast<double>(j);
    double wp = std::pow(limit_envelope(t, minor), L) - 1.0 + std::exp(-t);
    double wn = std::pow(limit_envelope(-t, minor), L);
    if (t >= 1.0) {
      double ripple = (1.0 - std::cos(2.0 * kPi * t)) / (t * t);
      wp -= cpos * ripple;
      wn -= cneg * ripple;
    }
    a[static_cast<std::size_t>(j)] = wp;
    a[P - static_cast<std::size_t>(j)] = wn;
  }
  fft_radix2(a);

  LimitTable tbl;
  std::size_t keep = P / 4 + 1;
  tbl.grid.start = 0.0;
  tbl.grid.step = 2.0 * kPi / (static_cast<double>(P) * h);
  tbl.grid.values.resize(keep);
  // trapezoid value minus the h^2/12 alias term fed by the unit derivative
  // jump at t = 0, minus the transform of the smoothing step*e^{-t}, plus the
  // ripple transforms (left tail reflects to the conjugate)
  for (std::size_t k = 0; k < keep; ++k) {
    double theta = tbl.grid.step * static_cast<double>(k);
    cplx rip = cpos * ripple_transform(theta) + cneg * std::conj(ripple_transform(theta));
    tbl.grid.values[k] = h * a[k] - h * h / 12.0 - 1.0 / cplx(1.0, theta) + rip;
  }
  tbl.theta_max = tbl.grid.step * static_cast<double>(keep - 1);
  return cache.emplace(std::make_pair(L, minor), std::move(tbl)).first->second;
}

}  // namespace

double majorant_limit(double t) { return limit_envelope(t, false); }

double minorant_limit(double t) { return limit_envelope(t, true); }

cplx hat_limit(int L, double delta, double tau, bool minor) {
  if (L < 1) throw DomainError("hat_limit: L must be >= 1");
  if (minor && L % 2 == 0) throw DomainError("hat_limit: minorant needs odd L");
  if (!(delta > 0.0)) throw DomainError("hat_limit: delta must be positive");
  if (tau == 0.0) throw DomainError("hat_limit: tau = 0 is the divergent point");
  const LimitTable& tbl = limit_table(L, minor);
  double theta = 2.0 * kPi * std::abs(tau) / delta;
  if (theta > tbl.theta_max) throw DomainError("hat_limit: frequency outside tabulated range");
  cplx v = 1.0 / cplx(0.0, theta) + tbl.grid.value_at(theta);
  v *= 2.0 * kPi / delta;
  return tau < 0.0 ? std::conj(v) : v;
}

LimitKink limit_kink(int L, bool minor) {
  if (L < 1) throw DomainError("limit_kink: L must be >= 1");
  if (minor && L % 2 == 0) throw DomainError("limit_kink: minorant needs odd L");
  // Each one-sided ripple transform int_1^inf (1 - cos 2 pi u)/u^2 e^{-i v u}du
  // carries -(pi/2)|v| + i v ln|v| past its analytic part at v = 0; the -1/2
  // cosine weight places that at 2 pi, the left tail enters conjugated.
  double cpos, cneg;
  ripple_amplitudes(L, minor, &cpos, &cneg);
  return {kPi / 4.0 * (cpos + cneg), -0.5 * (cpos - cneg)};
}

double majorant1_node_value(double omega, long long n) {
  if (!(omega > 0.0)) throw DomainError("majorant1_node_value: omega must be positive");
  return n >= 0 ? std::exp(-omega * static_cast<double>(n)) : 0.0;
}

}  // namespace lstail
