#include "lstail/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <gsl/gsl_fft_complex.h>

#include "lstail/error.hpp"

namespace lstail {

namespace {

// QUADPACK 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
constexpr double xgk[8] = {
    0.99145537112081263921, 0.94910791234275852453, 0.86486442335976907279,
    0.74153118559939443986, 0.58608723546769113029, 0.40584515137739716691,
    0.20778495500789846760, 0.0};
constexpr double wgk[8] = {
    0.02293532201052922496, 0.06309209262997855329, 0.10479001032225018384,
    0.14065325971552591875, 0.16900472663926790283, 0.19035057806478540991,
    0.20443294007529889241, 0.20948214108472782801};
constexpr double wg[4] = {
    0.12948496616886969327, 0.27970539148927666790, 0.38183005050511894495,
    0.41795918367346938776};

struct Panel {
  double a, b;
  cplx value;
  double err;
};

Panel eval_panel(const std::function<cplx(double)>& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cplx fc = f(c);
  cplx res_g = wg[3] * fc;
  cplx res_k = wgk[7] * fc;
  for (int j = 0; j < 7; ++j) {
    double dx = h * xgk[j];
    cplx fs = f(c - dx) + f(c + dx);
    res_k += wgk[j] * fs;
    if (j % 2 == 1) res_g += wg[j / 2] * fs;
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = res_k * h;
  double diff = std::abs(res_k - res_g) * h;
  p.err = std::pow(200.0 * diff, 1.5);  // QUADPACK-style sharpened estimate
  if (p.err > diff) p.err = diff;
  if (diff > 1e-14) p.err = std::max(p.err, 1e-16 * std::abs(p.value));
  return p;
}

QuadResult adapt(const std::function<cplx(double)>& f, std::vector<Panel> panels,
                 double rel_tol, double abs_tol, int max_panels) {
  int evals = static_cast<int>(panels.size()) * 15;
  for (;;) {
    cplx total = 0.0;
    double err = 0.0;
    for (const Panel& p : panels) {
      total += p.value;
      err += p.err;
    }
    double target = std::max(abs_tol, rel_tol * std::abs(total));
    if (err <= target || err < 1e-300) return {total, err, evals};
    if (static_cast<int>(panels.size()) >= max_panels)
      throw AccuracyError("adaptive quadrature: panel budget exhausted");
    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i)
      if (panels[i].err > panels[worst].err) worst = i;
    Panel old = panels[worst];
    double mid = 0.5 * (old.a + old.b);
    panels[worst] = eval_panel(f, old.a, mid);
    panels.push_back(eval_panel(f, mid, old.b));
    evals += 30;
  }
}

}  // namespace

QuadResult integrate(const std::function<cplx(double)>& f, double a, double b,
                     double rel_tol, double abs_tol, int max_panels) {
  if (a == b) return {0.0, 0.0, 0};
  return adapt(f, {eval_panel(f, a, b)}, rel_tol, abs_tol, max_panels);
}

QuadResult integrate_split(const std::function<cplx(double)>& f,
                           const std::vector<double>& points, double rel_tol,
                           double abs_tol, int max_panels) {
  std::vector<double> pts = points;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 2) throw DomainError("integrate_split: need at least two points");
  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    panels.push_back(eval_panel(f, pts[i], pts[i + 1]));
  return adapt(f, std::move(panels), rel_tol, abs_tol, max_panels);
}

QuadResult integrate_tail(const std::function<cplx(double)>& f, double a,
                          const std::function<double(double)>& tail_bound,
                          double rel_tol, double abs_tol) {
  cplx total = 0.0;
  double err = 0.0;
  int evals = 0;
  double lo = a, hi = std::max(2.0 * std::abs(a), a + 1.0);
  for (int seg = 0; seg < 120; ++seg) {
    // wide budget: near-axis oscillatory tails need ~1 panel per period before
    // the error estimate can see the cancellation
    QuadResult q = integrate(f, lo, hi, rel_tol, abs_tol * 0.5, 20000);
    total += q.value;
    err += q.err_estimate;
    evals += q.evaluations;
    double remaining = tail_bound(hi);
    double target = std::max(abs_tol, rel_tol * std::abs(total));
    if (remaining <= target) return {total, err + remaining, evals};
    lo = hi;
    hi *= 2.0;
  }
  throw AccuracyError("integrate_tail: tail bound never met the tolerance");
}

namespace {

// moments M_k = integral_0^h u^k e^{i theta u} du, k = 0..3
void filon_moments(double theta, double h, cplx m[4]) {
  double th = theta * h;
  if (std::abs(th) < 0.5) {
    for (int k = 0; k < 4; ++k) {
      cplx sum = 0.0, term = 1.0;  // term = (i theta)^j / j!
      double hp = std::pow(h, k + 1);
      for (int j = 0; j < 24; ++j) {
        sum += term * (hp / (k + j + 1));
        hp *= h;
        term *= cplx(0.0, theta) / static_cast<double>(j + 1);
        if (std::abs(term) * hp < 1e-20) break;
      }
      m[k] = sum;
    }
    return;
  }
  cplx it = cplx(0.0, theta);
  cplx eith = std::polar(1.0, th);
  m[0] = (eith - 1.0) / it;
  double hp = 1.0;
  for (int k = 1; k < 4; ++k) {
    hp *= h;
    m[k] = (hp * eith - static_cast<double>(k) * m[k - 1]) / it;
  }
}

}  // namespace

cplx filon_integral(double a, double h, const std::vector<cplx>& f, double theta) {
  std::size_t n = f.size();
  if (n < 2) return 0.0;
  // finite-difference slopes, one sided at the ends
  std::vector<cplx> slope(n);
  slope[0] = (-1.5 * f[0] + 2.0 * f[1] - 0.5 * f[std::min<std::size_t>(2, n - 1)]) / h;
  slope[n - 1] = (1.5 * f[n - 1] - 2.0 * f[n - 2] + 0.5 * f[n >= 3 ? n - 3 : 0]) / h;
  for (std::size_t j = 1; j + 1 < n; ++j) slope[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
  if (n == 2) {
    slope[0] = slope[1] = (f[1] - f[0]) / h;
  }

  cplx m[4];
  filon_moments(theta, h, m);
  cplx rot = std::polar(1.0, theta * a);
  cplx step = std::polar(1.0, theta * h);
  cplx acc = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    cplx d = (f[j + 1] - f[j]) / h;
    cplx c0 = f[j];
    cplx c1 = slope[j];
    cplx c2 = (3.0 * d - 2.0 * slope[j] - slope[j + 1]) / h;
    cplx c3 = (slope[j] + slope[j + 1] - 2.0 * d) / (h * h);
    acc += rot * (c0 * m[0] + c1 * m[1] + c2 * m[2] + c3 * m[3]);
    rot *= step;
    if ((j & 1023) == 1023) rot /= std::abs(rot);  // keep the rotation on the circle
  }
  return acc;
}

void fft_radix2(std::vector<cplx>& x) {
  std::size_t n = x.size();
  if (n == 0 || (n & (n - 1)) != 0) throw DomainError("fft_radix2: size must be a power of two");
  // std::complex<double> is layout-compatible with double[2]
  auto* data = reinterpret_cast<double*>(x.data());
  if (gsl_fft_complex_radix2_forward(data, 1, n) != 0)
    throw AccuracyError("fft_radix2: GSL transform failed");
}

std::vector<double> least_squares(const std::vector<std::vector<double>>& columns,
                                  const std::vector<double>& y, double* residual_out,
                                  double cond_limit) {
  if (columns.empty()) throw DomainError("least_squares: no columns");
  const std::size_t rows = y.size(), cols = columns.size();
  Eigen::MatrixXd X(rows, cols);
  std::vector<double> scale(cols, 1.0);
  for (std::size_t c = 0; c < cols; ++c) {
    if (columns[c].size() != rows) throw DomainError("least_squares: ragged columns");
    double m = 0.0;
    for (double v : columns[c]) m = std::max(m, std::abs(v));
    scale[c] = (m > 0.0) ? m : 1.0;
    for (std::size_t i = 0; i < rows; ++i) X(i, c) = columns[c][i] / scale[c];
  }
  Eigen::VectorXd rhs(rows);
  for (std::size_t i = 0; i < rows; ++i) rhs(i) = y[i];
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  const auto& R = qr.matrixR();
  double dmax = 0.0, dmin = 1e300;
  for (std::size_t c = 0; c < cols; ++c) {
    double d = std::abs(R(c, c));
    dmax = std::max(dmax, d);
    dmin = std::min(dmin, d);
  }
  if (!(dmin > 0.0) || dmax / dmin > cond_limit)
    throw InvariantError("least_squares: design matrix condition number too large");
  Eigen::VectorXd b = qr.solve(rhs);
  if (residual_out) *residual_out = std::sqrt((X * b - rhs).squaredNorm() / rows);
  std::vector<double> out(cols);
  for (std::size_t c = 0; c < cols; ++c) out[c] = b(c) / scale[c];
  return out;
}

std::vector<double> solve_dense(const std::vector<std::vector<double>>& rows,
                                const std::vector<double>& rhs) {
  const std::size_t n = rhs.size();
  Eigen::MatrixXd M(n, n);
  Eigen::VectorXd v(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw DomainError("solve_dense: non-square system");
    for (std::size_t j = 0; j < n; ++j) M(i, j) = rows[i][j];
    v(i) = rhs[i];
  }
  Eigen::VectorXd x = M.partialPivLu().solve(v);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x(i);
  return out;
}

}  // namespace lstail
