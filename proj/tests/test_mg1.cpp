#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "lstail/error.hpp"
#include "lstail/mg1.hpp"
#include "lstail/special.hpp"

using lstail::cplx;

TEST_CASE("normalization at z -> 1") {
  CHECK(std::abs(lstail::normalize_pi0(0.5, 1.5) - 0.25) < 1e-15);
  CHECK_THROWS_AS(lstail::normalize_pi0(1.0, 0.5), lstail::DomainError);
}

TEST_CASE("catalog service model") {
  auto m = lstail::make_mg1_zeta_service(3, 0.5, 4000);
  // geometric increment with mean 1/2: ratio 1/3, a_0 = 2/3, a_1 = 2/9
  CHECK(std::abs(m.a[0] - 2.0 / 3.0) < 1e-14);
  CHECK(std::abs(m.a[1] - 2.0 / 9.0) < 1e-14);
  double mass_a = std::accumulate(m.a.begin(), m.a.end(), 0.0);
  CHECK(std::abs(mass_a - 1.0) < 1e-11);
  CHECK(std::abs(m.mean_a - 0.5) < 1e-10);
  CHECK(std::abs(m.mean_b - (lstail::zeta(3.0) - 1.0)) < 1e-6);
  CHECK(std::abs(m.pi0 - 0.5 / (0.5 + lstail::zeta(3.0) - 1.0)) < 1e-6);
  CHECK(m.b_tail_exponent == -3.0);

  CHECK_THROWS_AS(lstail::make_mg1_zeta_service(1, 0.5, 4000), lstail::DomainError);
  CHECK_THROWS_AS(lstail::make_mg1_zeta_service(3, 1.2, 4000), lstail::DomainError);
  CHECK_THROWS_AS(lstail::make_mg1_zeta_service(3, 0.5, 10), lstail::DomainError);
}

TEST_CASE("model validation") {
  std::vector<double> a = {0.6, 0.4}, b = {0.5, 0.5};
  CHECK(lstail::make_mg1_model(a, b).pi0 > 0.0);
  std::vector<double> a_bad = {0.0, 1.0};
  CHECK_THROWS_AS(lstail::make_mg1_model(a_bad, b), lstail::DomainError);
  std::vector<double> b_neg = {0.5, -0.1};
  CHECK_THROWS_AS(lstail::make_mg1_model(a, b_neg), lstail::DomainError);
  std::vector<double> a_heavy = {0.9, 0.9};
  CHECK_THROWS_AS(lstail::make_mg1_model(a_heavy, b), lstail::DomainError);
}

TEST_CASE("generating function endpoints") {
  auto m = lstail::make_mg1_zeta_service(3, 0.5, 2000);
  CHECK(pk_pgf(m, cplx(1.0, 0.0)) == cplx(1.0, 0.0));
  CHECK(std::abs(pk_pgf(m, cplx(0.0, 0.0)) - cplx(m.pi0, 0.0)) < 1e-14);
}

TEST_CASE("series coefficients match the generating function") {
  auto m = lstail::make_mg1_zeta_service(3, 0.5, 2000);
  auto pi = lstail::pi_coefficients(m, 400);
  REQUIRE(pi.size() == 401);
  CHECK(std::abs(pi[0] - m.pi0) < 1e-15);
  for (double v : pi) CHECK(v >= 0.0);

  cplx z(0.5, 0.0);
  cplx acc(0.0, 0.0), zn(1.0, 0.0);
  for (double v : pi) {
    acc += v * zn;
    zn *= z;
  }
  CHECK(std::abs(acc - pk_pgf(m, z)) < 1e-10);

  CHECK_THROWS_AS(lstail::pi_coefficients(m, 5000), lstail::DomainError);
}

TEST_CASE("series coefficients match the truncated-chain oracle") {
  auto m = lstail::make_mg1_zeta_service(3, 0.5, 4000);
  const std::size_t N = 1000;
  auto pi = lstail::pi_coefficients(m, N);
  auto oracle = lstail::chain_oracle(m, N);
  REQUIRE(oracle.size() == N + 1);
  double worst = 0.0;
  for (std::size_t n = 0; n <= N; ++n) worst = std::max(worst, std::abs(pi[n] - oracle[n]));
  CHECK(worst <= 1e-6);
}

TEST_CASE("stationary tail decays like the service tail") {
  auto m = lstail::make_mg1_zeta_service(3, 0.5, 8000);
  auto rep = lstail::mg1_tail_report(m, 2000);
  CHECK(rep.eta_b == -3.0);
  CHECK(std::abs(rep.eta_pi + 3.0) <= 0.15);
  CHECK(rep.verdict);
  CHECK(std::abs(rep.mass - 1.0) < 0.01);
  CHECK(rep.pi0 == m.pi0);
  CHECK(rep.pi.size() == 2001);
}
