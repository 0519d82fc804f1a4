#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "doctest.h"
#include "lstail/error.hpp"
#include "lstail/extremal.hpp"
#include "lstail/special.hpp"

using lstail::cplx;
using lstail::kPi;

namespace {

// Trapezoid Fourier sum.  The envelope functions are entire of exponential
// type 2pi (per factor) and decay like 1/t^2, so on a uniform grid finer than
// the Nyquist step the sum equals the transform up to window truncation; this
// is the quadrature oracle the closed forms are judged against.
cplx trapezoid_ft(const std::vector<double>& f, double a, double h, double tau) {
  cplx rot = std::exp(cplx(0.0, -tau * h));
  cplx phase = std::exp(cplx(0.0, -tau * a));
  cplx acc(0.0, 0.0);
  for (std::size_t j = 0; j < f.size(); ++j) {
    double w = (j == 0 || j + 1 == f.size()) ? 0.5 : 1.0;
    acc += w * f[j] * phase;
    phase *= rot;
  }
  return acc * h;
}

std::vector<double> sample_window(const std::function<double(double)>& f, double a,
                                  double b, double h, double* out_a) {
  std::size_t n = static_cast<std::size_t>(std::lround((b - a) / h)) + 1;
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = f(a + static_cast<double>(j) * h);
  *out_a = a;
  return v;
}

}  // namespace

TEST_CASE("node values at integers") {
  for (double omega : {0.25, 1.0}) {
    for (long long n = -4; n <= 8; ++n) {
      double want = n >= 0 ? std::exp(-static_cast<double>(n) * omega) : 0.0;
      CHECK(std::abs(lstail::majorant1_node_value(omega, n) - want) < 1e-11);
    }
    // direct evaluation at an integer goes through the removable-singularity
    // branches and must agree
    CHECK(std::abs(lstail::majorant1(omega, 3.0) - std::exp(-3.0 * omega)) < 1e-11);
    CHECK(std::abs(lstail::majorant1(omega, -2.0)) < 1e-11);
  }
}

TEST_CASE("envelopes sandwich the tilted step") {
  std::mt19937_64 rng(2024);
  auto uniform = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  struct Combo {
    int L;
    double sigma, delta;
  };
  for (Combo c : {Combo{1, 0.5, 2.0}, Combo{3, 0.05, 0.5}}) {
    int bad = 0;
    for (int i = 0; i < 2000; ++i) {
      double t = -50.0 + 100.0 * uniform();
      double step = t >= 0.0 ? std::exp(-c.L * c.sigma * t) : 0.0;
      double up = lstail::majorant(c.L, c.sigma, c.delta, t);
      double lo = lstail::minorant(c.L, c.sigma, c.delta, t);
      if (!(lo <= step + 1e-10 && step <= up + 1e-10)) ++bad;
    }
    CHECK(bad == 0);
  }
  CHECK_THROWS_AS(lstail::minorant(2, 0.5, 1.0, 0.3), lstail::DomainError);
}

TEST_CASE("factor transforms, frozen pieces") {
  CHECK(lstail::hat_q1(0.0) == 1.0);
  CHECK(std::abs(lstail::hat_q1(kPi) - 0.5) < 1e-15);
  CHECK(lstail::hat_q1(2.0 * kPi) == 0.0);
  CHECK(lstail::hat_q1(7.0) == 0.0);
  CHECK(lstail::hat_q2(-0.1) == cplx(0.0, 0.5));
  CHECK(lstail::hat_q2(0.0) == cplx(0.0, -0.5));
  CHECK(lstail::hat_q2(-2.0 * kPi) == cplx(0.0, 0.5));
  CHECK(lstail::hat_q2(2.0 * kPi) == cplx(0.0, 0.0));

  double omega = 0.7;
  double mass = lstail::hat_m1_total_mass(omega);
  CHECK(std::abs(mass - std::exp(-omega) / (1.0 - std::exp(-omega))) < 1e-15);
  CHECK(std::abs(lstail::hat_minorant1(omega, 0.0) - cplx(mass, 0.0)) < 1e-14);
  CHECK(std::abs(lstail::hat_majorant1(omega, 0.0) - cplx(1.0 / (1.0 - std::exp(-omega)), 0.0)) <
        1e-14);
}

TEST_CASE("closed transforms against the trapezoid oracle") {
  double omega = 0.5, a = 0.0, h = std::pow(2.0, -8);
  auto maj = [&](double t) { return lstail::majorant1(omega, t); };
  auto min_ = [&](double t) { return lstail::minorant1(omega, t); };
  auto fM = sample_window(maj, -200.0, 200.0, h, &a);
  auto fm = sample_window(min_, -200.0, 200.0, h, &a);
  for (double tau : {0.5, 2.0, 5.5}) {
    CHECK(std::abs(trapezoid_ft(fM, a, h, tau) - lstail::hat_majorant1(omega, tau)) < 2e-3);
    CHECK(std::abs(trapezoid_ft(fm, a, h, tau) - lstail::hat_minorant1(omega, tau)) < 2e-3);
  }
  // compact support: the oracle must vanish past 2pi
  CHECK(std::abs(trapezoid_ft(fM, a, h, 7.5)) < 2e-3);
  CHECK(std::abs(lstail::hat_majorant1(omega, 7.5)) == 0.0);
}

TEST_CASE("grid transform of powers") {
  // L = 1: plain rescale of the factor transform
  double sigma = 0.3, delta = 1.0;
  double omega = 2.0 * kPi * sigma / delta;
  std::vector<double> taus = {0.3, 1.1};
  auto got = lstail::hat_power(1, sigma, delta, taus, false);
  REQUIRE(got.size() == 2);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    cplx want = (2.0 * kPi / delta) * lstail::hat_majorant1(omega, 2.0 * kPi * taus[i] / delta);
    CHECK(std::abs(got[i] - want) < 1e-6);
  }

  // delta = 2pi makes the rescale trivial: the L-th power transform is the
  // plain transform of majorant1^L, checkable by the trapezoid oracle
  double h = std::pow(2.0, -8), a = 0.0;
  auto sq = [&](double t) {
    double v = lstail::majorant1(0.5, t);
    return v * v;
  };
  auto fsq = sample_window(sq, -200.0, 200.0, h, &a);
  std::vector<double> t2 = {0.5, 3.0, 7.0};
  auto got2 = lstail::hat_power(2, 0.5, 2.0 * kPi, t2, false);
  for (std::size_t i = 0; i < t2.size(); ++i)
    CHECK(std::abs(got2[i] - trapezoid_ft(fsq, a, h, t2[i])) < 1e-3);

  // grid and pointwise routes agree
  std::vector<double> one = {1.7};
  auto g3 = lstail::hat_power(3, 0.3, 1.0, one, false);
  cplx p3 = lstail::hat_power_pointwise(3, 0.3, 1.0, 1.7, false);
  CHECK(std::abs(g3[0] - p3) < 1e-4 * (1.0 + std::abs(p3)));

  // peak narrower than the grid step is refused on the convolution path
  // (L = 1 has a closed form and needs no grid)
  std::vector<double> t0 = {0.1};
  CHECK_THROWS_AS(lstail::hat_power(2, 1e-5, 1.0, t0, false), lstail::AccuracyError);
}

TEST_CASE("vanishing-tilt limit transform") {
  // frozen value at L=1, delta=2pi, tau=pi: 1/4 - i/(2 pi)
  cplx got = lstail::hat_limit(1, 2.0 * kPi, kPi, false);
  CHECK(std::abs(got - cplx(0.25, -1.0 / (2.0 * kPi))) < 1e-4);

  // conjugate symmetry
  cplx plus = lstail::hat_limit(3, 1.0, 0.8, false);
  cplx minus = lstail::hat_limit(3, 1.0, -0.8, false);
  CHECK(std::abs(minus - std::conj(plus)) < 1e-10);

  // agrees with the pointwise route at a tiny positive tilt
  for (int L : {1, 3}) {
    double tau = 0.5 * L * 1.0 / 2.0;
    cplx lim = lstail::hat_limit(L, 1.0, tau, false);
    cplx small = lstail::hat_power_pointwise(L, 1e-5, 1.0, tau, false);
    CHECK(std::abs(lim - small) < 1e-3 * std::abs(lim));
  }
  cplx limm = lstail::hat_limit(3, 1.0, 0.6, true);
  cplx smallm = lstail::hat_power_pointwise(3, 1e-5, 1.0, 0.6, true);
  CHECK(std::abs(limm - smallm) < 1e-3 * std::abs(limm));

  // support: negligible mass beyond L delta
  double peak = std::abs(lstail::hat_limit(1, 1.0, 0.3, false));
  CHECK(std::abs(lstail::hat_limit(1, 1.0, 1.3, false)) < 1e-4 * peak);
  CHECK_THROWS_AS(lstail::hat_limit(1, 1.0, 0.0, false), lstail::DomainError);
}

TEST_CASE("limit envelopes in the time domain") {
  // psi'(3/2) = pi^2/2 - 4 gives M0(1/2) = 1/2 + 6/pi^2, m0(1/2) = 1/2 + 2/pi^2;
  // the omega -> 0 envelopes approach these
  double M0 = 0.5 + 6.0 / (kPi * kPi);
  double m0 = 0.5 + 2.0 / (kPi * kPi);
  CHECK(std::abs(lstail::majorant1(1e-4, 0.5) - M0) < 2e-3);
  CHECK(std::abs(lstail::minorant1(1e-4, 0.5) - m0) < 2e-3);
}

TEST_CASE("grid interpolation is exact on cubics") {
  lstail::GridFunction g;
  g.start = 0.0;
  g.step = 0.25;
  g.values.resize(9);
  auto cubic = [](double t) { return t * t * t - 2.0 * t + 1.0; };
  for (std::size_t j = 0; j < g.values.size(); ++j)
    g.values[j] = cplx(cubic(g.start + g.step * static_cast<double>(j)), 0.0);
  for (double t : {0.05, 0.6, 1.3, 1.95}) {
    CHECK(std::abs(g.value_at(t) - cplx(cubic(t), 0.0)) < 1e-12);
  }
}
