#include "lstail/correction.hpp"

#include <cmath>

#include "lstail/error.hpp"
#include "lstail/quadrature.hpp"

namespace lstail {

namespace {

// inverse of the canonical singular coefficient at exponent rho = r + k
double inverse_canonical_coefficient(const SingularityForm& form, int k) {
  if (form.kind == SingularityForm::Kind::power_log) {
    int rho = form.r_floor() + k;
    double v = std::tgamma(rho + 1.0);
    return (rho % 2 == 0) ? -v : v;  // 1/c_rho = (-1)^{rho+1} rho!
  }
  double rho = form.r + k;
  int rho0 = form.r_floor() + k;
  double v = std::sin(kPi * form.r_frac()) / kPi * std::tgamma(rho + 1.0);
  return (rho0 % 2 == 0) ? -v : v;
}

cplx singular_from_g(const SingularityForm& form, std::span<const double> g, cplx s) {
  cplx lg = (form.kind == SingularityForm::Kind::power_log) ? log_principal(s) : cplx(1.0);
  cplx acc = 0.0, sk = pow_principal(s, form.r);
  for (std::size_t k = 0; k < g.size(); ++k) {
    acc += g[k] / inverse_canonical_coefficient(form, static_cast<int>(k)) * sk;
    sk *= s;
  }
  return acc * lg;
}

}  // namespace

std::vector<double> g_coefficients(const SingularityForm& form, int L) {
  if (L < 1) throw DomainError("g_coefficients: L must be >= 1");
  if (static_cast<int>(form.alpha.size()) < L)
    throw DomainError("g_coefficients: form holds too few alpha coefficients");
  if (!(form.r > 0.0)) throw DomainError("g_coefficients: r must be positive");
  std::vector<double> g(L);
  for (int k = 0; k < L; ++k) g[k] = inverse_canonical_coefficient(form, k) * form.alpha[k];
  if (!(g[0] > 0.0)) throw InvariantError("g_coefficients: leading kernel weight must be positive");
  return g;
}

double g_star(const CorrectionPair& pair, double t) {
  if (t < 1.0) return 0.0;
  double acc = 0.0;
  double p = std::pow(t, -(pair.form.r + 1.0));
  for (double gk : pair.g) {
    acc += gk * p;
    p /= t;
  }
  return acc;
}

double h_star(std::span<const double> d, double t) {
  double acc = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    double kk = static_cast<double>(k + 1);
    acc += d[k] * kk * std::exp(-kk * t);
  }
  return acc;
}

cplx G_star(const CorrectionPair& pair, cplx s, double rel_tol) {
  (void)rel_tol;
  if (s.real() < 0.0) throw DomainError("G_star: Re s < 0");
  double r = pair.form.r;
  cplx acc = 0.0;
  for (std::size_t k = 0; k < pair.g.size(); ++k) {
    double rk = r + static_cast<double>(k);
    acc += (s == cplx(0.0)) ? cplx(pair.g[k] / rk)
                            : pair.g[k] * exp_integral_e(rk + 1.0, s);
  }
  return acc;
}

cplx H_star(std::span<const double> d, cplx s) {
  cplx acc = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    double kk = static_cast<double>(k + 1);
    acc += d[k] * kk / (s + kk);
  }
  return acc;
}

std::vector<double> tilde_beta_coefficients(const SingularityForm& form,
                                            std::span<const double> g, int L) {
  if (L < 1 || static_cast<int>(g.size()) != L)
    throw DomainError("tilde_beta_coefficients: g must hold exactly L entries");
  CorrectionPair probe;
  probe.form = form;
  probe.L = L;
  probe.g.assign(g.begin(), g.end());

  // constant term pinned to the exact moment G*(0); see the header note
  double c0 = 0.0;
  for (int k = 0; k < L; ++k) c0 += g[k] / (form.r + static_cast<double>(k));

  const int n_pts = 60;
  const int degree = L + 7;  // fit order; the remainder is entire so this is ample
  std::vector<double> ss(n_pts), y(n_pts);
  for (int i = 0; i < n_pts; ++i) {
    double f = static_cast<double>(i) / (n_pts - 1);
    double s = 1e-3 * std::pow(100.0, f);
    ss[i] = s;
    cplx rem = G_star(probe, s) - singular_from_g(form, g, s);
    y[i] = rem.real() - c0;
  }
  std::vector<std::vector<double>> cols(degree, std::vector<double>(n_pts));
  for (int i = 0; i < n_pts; ++i) {
    double p = ss[i];
    for (int j = 0; j < degree; ++j) {
      cols[j][i] = p;
      p *= ss[i];
    }
  }
  double residual = 0.0;
  std::vector<double> coef = least_squares(cols, y, &residual);
  if (residual > 1e-6)
    throw AccuracyError("tilde_beta_coefficients: remainder fit residual above 1e-6");
  coef.insert(coef.begin(), c0);
  coef.resize(L);
  return coef;
}

std::vector<double> solve_h_coeffs(std::span<const double> beta,
                                   std::span<const double> tilde_beta) {
  const std::size_t L = tilde_beta.size();
  if (L < 1 || beta.size() < L)
    throw DomainError("solve_h_coeffs: need at least L beta coefficients");
  std::vector<std::vector<double>> rows(L, std::vector<double>(L));
  std::vector<double> rhs(L);
  for (std::size_t m = 0; m < L; ++m) {
    rhs[m] = beta[m] - tilde_beta[m];
    for (std::size_t k = 0; k < L; ++k)
      rows[m][k] = std::pow(-1.0 / static_cast<double>(k + 1), static_cast<double>(m));
  }
  std::vector<double> d = solve_dense(rows, rhs);
  for (std::size_t m = 0; m < L; ++m) {
    double acc = 0.0;
    for (std::size_t k = 0; k < L; ++k) acc += rows[m][k] * d[k];
    if (std::abs(acc - rhs[m]) > 1e-10)
      throw AccuracyError("solve_h_coeffs: Vandermonde residual above 1e-10");
  }
  return d;
}

CorrectionPair build_correction(const SingularityForm& form, int L) {
  if (static_cast<int>(form.beta.size()) < L)
    throw DomainError("build_correction: form holds too few beta coefficients");
  CorrectionPair pair;
  pair.form = form;
  pair.L = L;
  pair.g = g_coefficients(form, L);
  pair.tilde_beta = tilde_beta_coefficients(form, pair.g, L);
  pair.d = solve_h_coeffs(form.beta, pair.tilde_beta);
  return pair;
}

cplx xi(const std::function<cplx(cplx)>& phi, const CorrectionPair& pair, cplx s,
        double rel_tol) {
  if (s.real() < 0.0) throw DomainError("xi: Re s < 0");
  return phi(s) - G_star(pair, s, rel_tol) - H_star(pair.d, s);
}

}  // namespace lstail
