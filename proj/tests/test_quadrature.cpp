#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "lstail/error.hpp"
#include "lstail/quadrature.hpp"

using lstail::cplx;
using lstail::kPi;

TEST_CASE("adaptive panels against closed forms") {
  auto sq = [](double x) { return cplx(x * x, 0.0); };
  CHECK(std::abs(lstail::integrate(sq, 0.0, 1.0).value - 1.0 / 3.0) < 1e-13);

  auto sine = [](double x) { return cplx(std::sin(x), 0.0); };
  CHECK(std::abs(lstail::integrate(sine, 0.0, kPi).value - 2.0) < 1e-12);

  // moderately oscillatory complex integrand
  auto osc = [](double x) { return std::exp(cplx(0.0, 7.0 * x)) * x; };
  // integral_0^1 x e^{i 7 x} dx by parts
  cplx i7(0.0, 7.0);
  cplx want = std::exp(i7) / i7 - (std::exp(i7) - 1.0) / (i7 * i7);
  CHECK(std::abs(lstail::integrate(osc, 0.0, 1.0).value - want) < 1e-12);
}

TEST_CASE("split integration handles interior kinks") {
  auto kink = [](double x) { return cplx(std::abs(x), 0.0); };
  auto r = lstail::integrate_split(kink, {-1.0, 0.0, 1.0});
  CHECK(std::abs(r.value - 1.0) < 1e-13);
}

TEST_CASE("tail integration with caller bounds") {
  auto inv2 = [](double t) { return cplx(1.0 / (t * t), 0.0); };
  auto bound2 = [](double T) { return 1.0 / T; };
  CHECK(std::abs(lstail::integrate_tail(inv2, 1.0, bound2).value - 1.0) < 1e-10);

  auto ex = [](double t) { return cplx(std::exp(-t), 0.0); };
  auto bex = [](double T) { return std::exp(-T); };
  CHECK(std::abs(lstail::integrate_tail(ex, 1.0, bex).value - std::exp(-1.0)) < 1e-12);
}

TEST_CASE("panel budget exhaustion raises") {
  // f integrable but with a non-integrable-looking spike cluster that the
  // budget of 8 panels cannot resolve to 1e-10
  auto f = [](double x) { return cplx(1.0 / std::sqrt(std::abs(x) + 1e-14), 0.0); };
  CHECK_THROWS_AS(lstail::integrate(f, -1.0, 1.0, 1e-12, 0.0, 8), lstail::AccuracyError);
}

TEST_CASE("filon grid integral matches closed forms") {
  // Gaussian against e^{i theta t}: integral = sqrt(2 pi) e^{-theta^2/2}
  double a = -8.0, h = 1.0 / 16.0;
  std::size_t n = static_cast<std::size_t>(16.0 / h) + 1;
  std::vector<cplx> f(n);
  for (std::size_t j = 0; j < n; ++j) {
    double t = a + static_cast<double>(j) * h;
    f[j] = cplx(std::exp(-0.5 * t * t), 0.0);
  }
  double theta = 3.0;
  cplx got = lstail::filon_integral(a, h, f, theta);
  double want = std::sqrt(2.0 * kPi) * std::exp(-0.5 * theta * theta);
  CHECK(std::abs(got - cplx(want, 0.0)) < 1e-5);

  // constant f at a fast oscillation: exact because cell moments are exact
  std::vector<cplx> ones(65, cplx(1.0, 0.0));
  double th = 200.0;
  cplx g2 = lstail::filon_integral(0.0, 1.0 / 16.0, ones, th);
  cplx w2 = (std::exp(cplx(0.0, th * 4.0)) - 1.0) / cplx(0.0, th);
  CHECK(std::abs(g2 - w2) < 1e-12);
}

TEST_CASE("filon agrees with adaptive quadrature at slow oscillation") {
  double a = 0.0, h = 1.0 / 64.0, theta = 0.7;
  std::size_t n = 129;  // [0, 2]
  std::vector<cplx> f(n);
  for (std::size_t j = 0; j < n; ++j) {
    double t = a + static_cast<double>(j) * h;
    f[j] = cplx(1.0 / (1.0 + t * t), 0.0);
  }
  cplx got = lstail::filon_integral(a, h, f, theta);
  auto g = [&](double t) {
    return cplx(1.0 / (1.0 + t * t), 0.0) * std::exp(cplx(0.0, theta * t));
  };
  cplx want = lstail::integrate(g, 0.0, 2.0, 1e-12).value;
  CHECK(std::abs(got - want) < 5e-9);
}

TEST_CASE("radix-2 fft against the direct transform") {
  std::vector<cplx> x = {{1.0, 0.5}, {-0.3, 0.2}, {0.0, -1.0}, {2.0, 0.0},
                         {0.7, 0.7}, {-1.1, 0.4}, {0.25, 0.0}, {0.0, 3.0}};
  std::vector<cplx> want(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < x.size(); ++j)
      acc += x[j] * std::exp(cplx(0.0, -2.0 * kPi * static_cast<double>(j * k) /
                                            static_cast<double>(x.size())));
    want[k] = acc;
  }
  std::vector<cplx> got = x;
  lstail::fft_radix2(got);
  for (std::size_t k = 0; k < x.size(); ++k) CHECK(std::abs(got[k] - want[k]) < 1e-12);

  std::vector<cplx> bad(6, cplx(0.0, 0.0));
  CHECK_THROWS_AS(lstail::fft_radix2(bad), lstail::DomainError);
}

TEST_CASE("least squares recovers exact coefficients") {
  std::vector<double> xs;
  for (int i = 0; i < 20; ++i) xs.push_back(0.1 * i);
  std::vector<std::vector<double>> cols(2);
  std::vector<double> y;
  for (double x : xs) {
    cols[0].push_back(1.0);
    cols[1].push_back(x);
    y.push_back(2.0 + 3.0 * x);
  }
  double resid = -1.0;
  auto b = lstail::least_squares(cols, y, &resid);
  REQUIRE(b.size() == 2);
  CHECK(std::abs(b[0] - 2.0) < 1e-12);
  CHECK(std::abs(b[1] - 3.0) < 1e-12);
  CHECK(resid < 1e-12);

  // alternating +-1e-3 noise: coefficients stay close, residual reports the noise
  std::vector<double> yn = y;
  for (std::size_t i = 0; i < yn.size(); ++i) yn[i] += (i % 2 == 0 ? 1e-3 : -1e-3);
  auto bn = lstail::least_squares(cols, yn, &resid);
  CHECK(std::abs(bn[0] - 2.0) < 1e-2);
  CHECK(std::abs(bn[1] - 3.0) < 1e-2);
  CHECK(resid > 1e-4);
  CHECK(resid < 1e-2);
}

TEST_CASE("least squares rejects collinear columns") {
  std::vector<std::vector<double>> cols(2);
  std::vector<double> y;
  for (int i = 0; i < 10; ++i) {
    cols[0].push_back(1.0 + i);
    cols[1].push_back(2.0 + 2.0 * i);
    y.push_back(i);
  }
  CHECK_THROWS_AS(lstail::least_squares(cols, y), lstail::InvariantError);
}

TEST_CASE("dense solve") {
  std::vector<std::vector<double>> m = {{2.0, 1.0}, {1.0, 3.0}};
  std::vector<double> rhs = {5.0, 10.0};
  auto d = lstail::solve_dense(m, rhs);
  REQUIRE(d.size() == 2);
  CHECK(std::abs(d[0] - 1.0) < 1e-13);
  CHECK(std::abs(d[1] - 3.0) < 1e-13);
}
