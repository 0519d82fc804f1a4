#include "lstail/tailbound.hpp"

#include <gsl/gsl_sf_expint.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lstail/error.hpp"
#include "lstail/extremal.hpp"
#include "lstail/quadrature.hpp"
#include "lstail/transform.hpp"

namespace lstail {

DecayFit decay_rate_estimate(std::span<const double> x, std::span<const double> p) {
  if (x.size() != p.size()) throw DomainError("decay_rate_estimate: length mismatch");
  if (x.size() < 10) throw DomainError("decay_rate_estimate: need at least 10 points");
  double x_min = *std::min_element(x.begin(), x.end());
  double x_max = *std::max_element(x.begin(), x.end());
  if (!(x_min > 0.0) || x_max < 100.0 * x_min)
    throw DomainError("decay_rate_estimate: points must span two decades");
  for (double v : p)
    if (!(v > 0.0)) throw DomainError("decay_rate_estimate: values must be positive");

  auto collect = [&](double lo) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] >= lo) idx.push_back(i);
    return idx;
  };
  std::vector<std::size_t> idx = collect(x_max / 10.0);
  if (idx.size() < 3) idx = collect(x_max / 100.0);

  double n = static_cast<double>(idx.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i : idx) {
    sx += std::log(x[i]);
    sy += std::log(p[i]);
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i : idx) {
    double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(p[i]) - my);
  }
  if (!(sxx > 0.0)) throw DomainError("decay_rate_estimate: degenerate abscissae");
  double slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i : idx) {
    double fit = my + slope * (std::log(x[i]) - mx);
    double d = std::log(p[i]) - fit;
    ss += d * d;
  }
  double se = idx.size() > 2 ? std::sqrt(ss / (n - 2.0) / sxx) : 0.0;
  return {slope, se, static_cast<int>(idx.size())};
}

namespace {

// Everywhere-valid bound on the first-order envelopes: the interpolation sums
// are dominated by sum_n nsinc^2 = 1 plus the q2 corrections.
double envelope_sup_bound(double omega, double u, bool minor) {
  double q = std::exp(-omega);
  double global = 1.5;
  if (u < 2.0) return global;
  double dec = (4.0 / (kPi * kPi * u * u) + 2.0 * std::exp(-0.5 * omega * u) +
                2.0 * omega / (kPi * u)) /
               (1.0 - q);
  if (minor) dec += 1.0 / (kPi * kPi * u * u);
  return std::min(global, dec);
}

std::vector<double> chebyshev_nodes(double lo, double hi, int m) {
  std::vector<double> t(m);
  double c = 0.5 * (lo + hi), rad = 0.5 * (hi - lo);
  for (int j = 0; j < m; ++j) t[j] = c + rad * std::cos((2.0 * j + 1.0) * kPi / (2.0 * m));
  return t;
}

cplx barycentric(const double* nodes, const cplx* vals, int m, double t) {
  cplx num = 0.0;
  double den = 0.0;
  for (int j = 0; j < m; ++j) {
    double dx = t - nodes[j];
    if (std::abs(dx) < 1e-14) return vals[j];
    double w = ((j % 2 == 0) ? 1.0 : -1.0) * std::sin((2.0 * j + 1.0) * kPi / (2.0 * m)) / dx;
    num += w * vals[j];
    den += w;
  }
  return num / den;
}

// absolute mass of f* past T, for truncating the tail integrals
std::function<double(double)> tail_mass_fn(const CorrectionPair& pair) {
  double r = pair.form.r;
  std::vector<double> g(pair.g.begin(), pair.g.end());
  std::vector<double> d(pair.d.begin(), pair.d.end());
  return [r, g, d](double T) {
    double acc = 0.0, p = std::pow(T, -r);
    for (std::size_t k = 0; k < g.size(); ++k) {
      acc += std::abs(g[k]) * p / (r + static_cast<double>(k));
      p /= T;
    }
    for (std::size_t k = 0; k < d.size(); ++k)
      acc += std::abs(d[k]) * std::exp(-static_cast<double>(k + 1) * T);
    return acc;
  };
}

// The limit envelopes obey |env| <= 1.5 everywhere and <= 1 + 1/u^2 past
// u = 2 (the trigamma combinations fall off like 1/2u^2 with a 1/pi^2
// prefactor, leaving wide margin).
std::function<double(double)> limit_tail_bound(const CorrectionPair& pair, int L,
                                               double delta, double x) {
  auto mass = tail_mass_fn(pair);
  return [mass, L, delta, x](double T) {
    double u = delta * (T - x) / (2.0 * kPi);
    double sup = u < 2.0 ? 1.5 : 1.0 + 1.0 / (u * u);
    return std::pow(sup, L) * mass(T);
  };
}

// Overshoot mass integral (env^L - step) du of the vanishing-tilt envelopes,
// measured once by direct quadrature of the closed forms.  It sets the bound
// slack: upper(x)/tail(x) - 1 ~ (2 pi / delta) * mass * r / x.
double envelope_overshoot_mass(int L, bool minor) {
  static const double maj[] = {0.5, 0.4493, 0.5037, 0.5929, 0.7054, 0.8378};
  static const double min_[] = {0.5, 0.0, 0.6556, 0.0, 0.7843, 0.0};
  const double* tbl = minor ? min_ : maj;
  if (L >= 1 && L <= 6 && tbl[L - 1] > 0.0) return tbl[L - 1];
  return 1.0;
}

// One-sided oscillatory moments against e^{ixv} on [0, c]:
//   U[k] = int v^k e^{ixv} dv,  V[k] = int v^k ln(v) e^{ixv} dv
// via V_k = ln(c) U_k - T_k with T_k = int U_k(v)/v dv, which shares the U
// recursion and starts from the sine and cosine integrals.
void kink_moments(double c, double x, cplx* U, cplx* V) {
  cplx ix(0.0, x);
  cplx ec = std::exp(cplx(0.0, x * c));
  U[0] = (ec - 1.0) / ix;
  double ck = 1.0;
  for (int k = 1; k <= 3; ++k) {
    ck *= c;
    U[k] = (ck * ec - static_cast<double>(k) * U[k - 1]) / ix;
  }
  double z = x * c;
  double cin = kEulerGamma + std::log(z) - gsl_sf_Ci(z);
  cplx T = cplx(-cin, gsl_sf_Si(z)) / ix;
  double lc = std::log(c);
  V[0] = lc * U[0] - T;
  for (int k = 1; k <= 3; ++k) {
    T = (U[k - 1] - static_cast<double>(k) * T) / ix;
    V[k] = lc * U[k] - T;
  }
}

// Exact integral of the kink model (kp |v| + kq v ln|v|)(xi0 + xi1 v + xi2 v^2)
// e^{ix tau} over tau in [0, L delta], v = tau - delta.  The v < 0 half folds
// onto conjugated moments; (-1)^j tracks the parity of v^j under that fold.
cplx kink_oscillatory(double kp, cplx kq, const cplx* xic, double delta, int L, double x) {
  double b = (L - 1) * delta;
  cplx Ua[4], Va[4], Ub[4]{}, Vb[4]{};
  kink_moments(delta, x, Ua, Va);
  if (b > 0.0) kink_moments(b, x, Ub, Vb);
  cplx total = 0.0;
  double sign = 1.0;
  for (int j = 0; j < 3; ++j) {
    cplx A = Ub[j + 1] + sign * std::conj(Ua[j + 1]);
    cplx B = Vb[j + 1] - sign * std::conj(Va[j + 1]);
    total += xic[j] * (kp * A + kq * B);
    sign = -sign;
  }
  return std::exp(cplx(0.0, x * delta)) * total;
}

}  // namespace

double BoundEngine::resolve_delta(int L, bool minor) const {
  if (set_.delta > 0.0) return set_.delta;
  double mass = envelope_overshoot_mass(L, minor);
  double want = 2.0 * kPi * mass * std::max(pair_.form.r, 0.4);
  // Lattice transforms replicate their s = 0 singularity at 2 pi k on the
  // axis; keep the whole frequency window [0, L delta] well inside the first
  // replica.  Continuous members only need the window to stay moderate.
  double cap = (dist_.discrete() ? 5.6 : 16.0) / static_cast<double>(L);
  return std::clamp(want, 0.1, cap);
}

BoundEngine::BoundEngine(const Distribution& dist, const CorrectionPair& pair,
                         const BoundSettings& settings)
    : dist_(dist), pair_(pair), set_(settings) {
  if (set_.L < 1) throw DomainError("BoundEngine: L must be >= 1");
  L_up_ = set_.L;
  L_low_ = (L_up_ % 2 == 1) ? L_up_ : L_up_ + 1;
  delta_up_ = resolve_delta(L_up_, false);
  delta_low_ = resolve_delta(L_low_, true);
  up_cache_ = build_cache(L_up_, false);
  low_cache_ = build_cache(L_low_, true);
}

BoundEngine::FreqCache BoundEngine::build_cache(int L, bool minor) const {
  double delta = minor ? delta_low_ : delta_up_;
  int m = set_.tau_points_per_cell;
  if (m < 8) throw DomainError("BoundEngine: tau_points_per_cell too small");
  FreqCache c;
  c.lim = L * delta;
  auto phi = [this](cplx s) { return dist_.phi_exact(s); };
  auto q = [&](double tau) { return xi(phi, pair_, cplx(0.0, tau)); };

  // The transform's kink at tau = delta defeats both the polynomial cells and
  // the cubic oscillatory rule, so the cache holds the product with the kink
  // model removed; t2 restores the model's integral in closed form.  Three
  // Taylor terms of xi about delta leave only |v|^3-grade residuals in the
  // cells.  hat(-tau) conjugates the transform, flipping the imaginary kink.
  LimitKink kink = limit_kink(L, minor);
  double scale = std::pow(2.0 * kPi / delta, 2);
  c.kp = scale * kink.abs_part;
  c.kq = cplx(0.0, -scale * kink.log_part);
  double step = 1e-3 * delta;
  cplx qm = q(delta - step), q0 = q(delta), qp = q(delta + step);
  c.xi0 = q0;
  c.xi1 = (qp - qm) / (2.0 * step);
  c.xi2 = 0.5 * (qp - 2.0 * q0 + qm) / (step * step);
  auto model = [&](double tau) {
    double v = tau - delta;
    cplx shape = c.kp * std::abs(v);
    if (v != 0.0) shape += c.kq * v * std::log(std::abs(v));
    return shape * (c.xi0 + v * (c.xi1 + v * c.xi2));
  };

  for (int cell = 0; cell < L; ++cell) {
    std::vector<double> nodes = chebyshev_nodes(cell * delta, (cell + 1) * delta, m);
    for (double tau : nodes) {
      cplx lim_v = hat_limit(L, delta, -tau, minor);
      c.tau.push_back(tau);
      c.product.push_back(lim_v * q(tau) - model(tau));
    }
  }
  return c;
}

double BoundEngine::t1(double x, bool minor) const {
  int L = minor ? L_low_ : L_up_;
  double delta = minor ? delta_low_ : delta_up_;
  auto env = [&](double t) {
    double u = delta * (t - x) / (2.0 * kPi);
    return std::pow(minor ? minorant_limit(u) : majorant_limit(u), L);
  };
  auto f_star = [&](double t) { return g_star(pair_, t) + h_star(pair_.d, t); };
  auto f = [&](double t) -> cplx { return env(t) * f_star(t); };

  // The envelope ripple past the step decays only like 1/u^2, so a fixed
  // relative target would force per-period panels out to u ~ 1/(tol x).
  // The bound itself is soft at the slack scale 2pi/(delta x); aiming three
  // orders below that keeps the panel count uniform in x.
  double eff_rel =
      std::max(set_.quad_rel_tol, std::min(1e-4, 2.0 * kPi * 1e-3 / (delta * x)));

  std::vector<double> pts = {0.0, x + 1.0};
  for (double p : {1.0, x - 1.0, x, x + 1.0 - 2.0 * kPi / delta})
    if (p > 0.0 && p < x + 1.0) pts.push_back(p);
  cplx head = integrate_split(f, pts, eff_rel, 1e-13, 20000).value;

  cplx tail =
      integrate_tail(f, x + 1.0, limit_tail_bound(pair_, L, delta, x), eff_rel, 1e-13).value;
  return (head + tail).real();
}

double BoundEngine::tilted_mass(double x, double sigma2, bool minor) const {
  if (!(x > 0.0)) throw DomainError("BoundEngine: x must be positive");
  if (!(sigma2 > 0.0)) throw DomainError("BoundEngine: sigma2 must be positive");
  int L = minor ? L_low_ : L_up_;
  double delta = minor ? delta_low_ : delta_up_;
  double omega = 2.0 * kPi * sigma2 / delta;
  auto env = [&](double t) {
    return minor ? minorant(L, sigma2, delta, t - x) : majorant(L, sigma2, delta, t - x);
  };
  auto f_star = [&](double t) { return g_star(pair_, t) + h_star(pair_.d, t); };
  auto f = [&](double t) -> cplx { return env(t) * f_star(t); };

  std::vector<double> pts = {0.0, x + 1.0};
  for (double p : {1.0, x - 1.0, x, x + 1.0 - 2.0 * kPi / delta})
    if (p > 0.0 && p < x + 1.0) pts.push_back(p);
  cplx head = integrate_split(f, pts, set_.quad_rel_tol, 1e-13, 20000).value;

  auto mass = tail_mass_fn(pair_);
  auto tail_bound = [&](double T) {
    double u = delta * (T - x) / (2.0 * kPi);
    return std::pow(envelope_sup_bound(omega, u, minor), L) * mass(T);
  };
  cplx tail = integrate_tail(f, x + 1.0, tail_bound, set_.quad_rel_tol, 1e-13).value;
  return (head + tail).real();
}

double BoundEngine::t2(double x, bool minor) const {
  const FreqCache& c = minor ? low_cache_ : up_cache_;
  int L = minor ? L_low_ : L_up_;
  double delta = minor ? delta_low_ : delta_up_;
  int m = set_.tau_points_per_cell;

  double h = std::min(delta / 2048.0, kPi / x);
  std::size_t cells = static_cast<std::size_t>(std::ceil(c.lim / h));
  h = c.lim / static_cast<double>(cells);
  std::vector<cplx> samples(cells + 1);
  for (std::size_t j = 0; j <= cells; ++j) {
    double tau = h * static_cast<double>(j);
    int cell = std::clamp(static_cast<int>(tau / delta), 0, L - 1);
    samples[j] = barycentric(&c.tau[cell * m], &c.product[cell * m], m, tau);
  }
  cplx xic[3] = {c.xi0, c.xi1, c.xi2};
  cplx osc = filon_integral(0.0, h, samples, x) +
             kink_oscillatory(c.kp, c.kq, xic, delta, L, x);
  return osc.real() / kPi;
}

double BoundEngine::side(double x, bool minor) const {
  if (!(x > 0.0)) throw DomainError("BoundEngine: x must be positive");
  return t1(x, minor) + t2(x, minor);
}

double BoundEngine::upper(double x) const { return side(x, false); }

double BoundEngine::lower(double x) const { return std::max(0.0, side(x, true)); }

BoundReport theorem_check(const Distribution& dist, int L, double x_lo, double x_hi,
                          int points, const BoundSettings* settings, bool use_exact_form) {
  if (!(x_lo > 0.0) || !(x_hi > x_lo)) throw DomainError("theorem_check: bad x range");
  if (points < 10) throw DomainError("theorem_check: need at least 10 points");

  BoundReport rep;
  SingularityForm fit_form;
  if (use_exact_form) {
    fit_form = dist.known_singularity(1, 2);
    rep.fit_residual = 0.0;
  } else {
    std::vector<FitSample> samples;
    const int n_s = 100;
    for (int i = 0; i < n_s; ++i) {
      double f = static_cast<double>(i) / (n_s - 1);
      double s = 2e-4 * std::pow(100.0, f);
      samples.push_back({s, phi_quadrature(dist, s).real()});
    }
    std::vector<double> candidates = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, dist.r};
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end(),
                                 [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                     candidates.end());
    FitResult fit = fit_singularity(samples, candidates, std::max(4, L + 2));
    fit_form = fit.form;
    rep.fit_residual = fit.residual;
  }
  rep.r_used = fit_form.r;
  rep.fit_alpha0 = fit_form.alpha.empty() ? 0.0 : fit_form.alpha[0];
  rep.sign_check_passed = sign_check(fit_form);

  SingularityForm exact = dist.known_singularity(L, L + 2);
  CorrectionPair pair = build_correction(exact, L);

  BoundSettings set = settings ? *settings : BoundSettings{};
  set.L = L;
  BoundEngine engine(dist, pair, set);

  rep.x.resize(points);
  for (int i = 0; i < points; ++i)
    rep.x[i] = x_lo * std::pow(x_hi / x_lo, static_cast<double>(i) / (points - 1));
  rep.sandwich_ok = true;
  for (double x : rep.x) {
    double lo = engine.lower(x), up = engine.upper(x), ex = dist.tail(x);
    rep.lower.push_back(lo);
    rep.upper.push_back(up);
    rep.tail_exact.push_back(ex);
    rep.scaled_lower.push_back(lo * std::pow(x, rep.r_used));
    rep.scaled_upper.push_back(up * std::pow(x, rep.r_used));
    if (!(lo <= ex && ex <= up)) rep.sandwich_ok = false;
  }
  rep.eta_lower = decay_rate_estimate(rep.x, rep.lower).slope;
  rep.eta_upper = decay_rate_estimate(rep.x, rep.upper).slope;
  rep.eta_exact = decay_rate_estimate(rep.x, rep.tail_exact).slope;

  std::ostringstream notes;
  notes << "orders " << engine.upper_order() << "/" << engine.lower_order() << ", delta "
        << engine.upper_delta() << "/" << engine.lower_delta()
        << ", vanishing-tilt envelopes, quad rel tol " << set.quad_rel_tol;
  rep.notes = notes.str();
  return rep;
}

std::vector<std::pair<double, double>> appendix_a1(double n1, double n2,
                                                   std::span<const double> xs) {
  if (!(n1 > 1.0) || !(n2 > 1.0)) throw DomainError("appendix_a1: exponents must exceed 1");
  std::vector<std::pair<double, double>> out;
  for (double x : xs) {
    if (!(x > 2.0)) throw DomainError("appendix_a1: x must exceed 2");
    auto f = [&](double t) -> cplx {
      return std::pow(x - t, -n1) * std::pow(t, -n2);
    };
    cplx v = integrate_split(f, {1.0, 0.5 * x, x - 1.0}, 1e-10, 1e-14, 20000).value;
    out.emplace_back(x, std::pow(x, std::min(n1, n2)) * v.real());
  }
  return out;
}

std::vector<std::pair<double, double>> appendix_a2(double k, double n,
                                                   std::span<const double> xs) {
  if (!(k > 0.0) || !(n > 1.0)) throw DomainError("appendix_a2: need k > 0, n > 1");
  std::vector<std::pair<double, double>> out;
  for (double x : xs) {
    if (!(x > 1.0)) throw DomainError("appendix_a2: x must exceed 1");
    auto f = [&](double t) -> cplx {
      return std::exp(-k * t) * std::pow(x - t, -n);
    };
    std::vector<double> pts = {0.0, x - 1.0};
    double knee = std::min(40.0 / k, 0.5 * (x - 1.0));
    if (knee > 0.0 && knee < x - 1.0) pts.push_back(knee);
    cplx v = integrate_split(f, pts, 1e-10, 1e-14, 20000).value;
    out.emplace_back(x, std::pow(x, n) * v.real());
  }
  return out;
}

std::vector<KorevaarPoint> korevaar_check(const Distribution& dist,
                                          std::span<const double> xs) {
  double r = dist.r;
  if (!(r > 0.0) || !(r < 1.0)) throw DomainError("korevaar_check: needs 0 < r < 1");
  double gamma1r = std::tgamma(1.0 - r);
  std::vector<KorevaarPoint> out;
  for (double x : xs) {
    if (!(x > 1.0)) throw DomainError("korevaar_check: x must exceed 1");
    double pr = std::pow(x, -r);
    double left = -dist.tail(x) / pr;
    double right = (dist.phi_exact(1.0 / x).real() - 1.0) / (pr * gamma1r);
    out.push_back({x, left, right});
  }
  return out;
}

}  // namespace lstail
