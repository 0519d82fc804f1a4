#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "lstail/correction.hpp"
#include "lstail/distribution.hpp"
#include "lstail/error.hpp"
#include "lstail/quadrature.hpp"
#include "lstail/special.hpp"

using lstail::cplx;
using lstail::kEulerGamma;
using lstail::kPi;

namespace {

lstail::CorrectionPair pair_with(double r, bool power_log, std::vector<double> g) {
  lstail::CorrectionPair p;
  p.form.kind = power_log ? lstail::SingularityForm::Kind::power_log
                          : lstail::SingularityForm::Kind::pure_power;
  p.form.r = r;
  p.L = static_cast<int>(g.size());
  p.g = std::move(g);
  return p;
}

}  // namespace

TEST_CASE("kernel weights from the singular coefficients") {
  // pareto r=1: alpha = (1, 0) -> g = (1, 0)
  auto g1 = lstail::g_coefficients(lstail::make_pareto(1.0).known_singularity(2, 2), 2);
  REQUIRE(g1.size() == 2);
  CHECK(std::abs(g1[0] - 1.0) < 1e-12);
  CHECK(std::abs(g1[1]) < 1e-12);

  // hand-made power_log r=2 with alpha_0 = -1/2 -> unit kernel weight
  lstail::SingularityForm f;
  f.kind = lstail::SingularityForm::Kind::power_log;
  f.r = 2.0;
  f.alpha = {-0.5};
  f.beta = {1.0};
  CHECK(std::abs(lstail::g_coefficients(f, 1)[0] - 1.0) < 1e-14);

  // pareto r=1/2: alpha_0 = -sqrt(pi) -> g_0 = 1/2 (the density weight)
  auto gh = lstail::g_coefficients(lstail::make_pareto(0.5).known_singularity(1, 1), 1);
  CHECK(std::abs(gh[0] - 0.5) < 1e-12);

  // zeta r=2: pmf ~ 2 n^{-3}, so the matched kernel weight is 2
  auto gz = lstail::g_coefficients(lstail::make_zeta_difference(2).known_singularity(1, 1), 1);
  CHECK(std::abs(gz[0] - 2.0) < 1e-12);

  // flipped leading coefficient violates the parity invariant
  auto bad = lstail::make_pareto(1.0).known_singularity(1, 1);
  bad.alpha[0] = -bad.alpha[0];
  CHECK_THROWS_AS(lstail::g_coefficients(bad, 1), lstail::InvariantError);
}

TEST_CASE("comparison density and repair kernel evaluations") {
  auto p = pair_with(1.0, true, {1.0, 0.0});
  CHECK(lstail::g_star(p, 0.5) == 0.0);
  CHECK(std::abs(lstail::g_star(p, 2.0) - 0.25) < 1e-15);

  std::vector<double> d = {0.3, -0.2};
  double t = 0.8;
  double want = 0.3 * std::exp(-t) - 0.2 * 2.0 * std::exp(-2.0 * t);
  CHECK(std::abs(lstail::h_star(d, t) - want) < 1e-15);

  // transform of h* by quadrature against the closed form
  cplx s(0.7, 0.0);
  auto f = [&](double u) { return cplx(lstail::h_star(d, u), 0.0) * std::exp(-s * u); };
  auto bound = [&](double T) {
    return (std::abs(d[0]) + 2.0 * std::abs(d[1])) * std::exp(-T);
  };
  cplx got = lstail::integrate_tail(f, 0.0, bound, 1e-12).value;
  CHECK(std::abs(got - lstail::H_star(d, s)) < 1e-10);
}

TEST_CASE("comparison transform against direct quadrature") {
  // closed form vs raw integration of e^{-st} g*(t) over the support
  auto check = [](const lstail::CorrectionPair& p, cplx s) {
    double sum = 0.0;
    for (double gk : p.g) sum += std::abs(gk);
    auto f = [&](double t) { return cplx(lstail::g_star(p, t), 0.0) * std::exp(-s * t); };
    auto bound = [&](double T) { return sum * std::exp(-s.real() * T) / s.real(); };
    cplx got = lstail::integrate_tail(f, 1.0, bound, 1e-12).value;
    CHECK(std::abs(got - lstail::G_star(p, s)) < 1e-10);
  };
  auto p = pair_with(1.0, true, {1.0, -0.3});
  check(p, cplx(0.7, 0.0));
  check(p, cplx(0.4, 1.3));
  check(p, cplx(0.05, 0.0));
  check(pair_with(0.5, false, {0.5, 0.2}), cplx(0.7, 0.2));

  // at s = 0 the transform is the kernel mass, sum g_k / (r + k)
  CHECK(std::abs(lstail::G_star(p, cplx(0.0, 0.0)) - 0.85) < 1e-12);
  CHECK_THROWS_AS(lstail::G_star(p, cplx(-0.1, 0.0)), lstail::DomainError);
}

TEST_CASE("analytic coefficients of the comparison transform") {
  // r=1, g=(1): E_2 analytic part starts 1 + (gamma-1)s
  auto f1 = lstail::make_pareto(1.0).known_singularity(1, 1);
  std::vector<double> g = {1.0};
  auto tb1 = lstail::tilde_beta_coefficients(f1, g, 1);
  REQUIRE(tb1.size() == 1);
  CHECK(std::abs(tb1[0] - 1.0) < 1e-5);

  auto f2 = lstail::make_pareto(1.0).known_singularity(2, 2);
  std::vector<double> g2 = {1.0, 0.0};
  auto tb2 = lstail::tilde_beta_coefficients(f2, g2, 2);
  CHECK(std::abs(tb2[0] - 1.0) < 1e-5);
  CHECK(std::abs(tb2[1] - (kEulerGamma - 1.0)) < 1e-4);

  // r=1/2, g=(1/2, 0): (1/2) E_{3/2} analytic part starts 1 + s
  auto fh = lstail::make_pareto(0.5).known_singularity(2, 2);
  std::vector<double> gh = {0.5, 0.0};
  auto tbh = lstail::tilde_beta_coefficients(fh, gh, 2);
  CHECK(std::abs(tbh[0] - 1.0) < 1e-5);
  CHECK(std::abs(tbh[1] - 1.0) < 1e-4);
}

TEST_CASE("repair coefficients solve the node system") {
  std::vector<double> beta = {0.3}, tb = {0.3};
  auto d0 = lstail::solve_h_coeffs(beta, tb);
  CHECK(std::abs(d0[0]) < 1e-14);

  std::vector<double> b1 = {0.7}, t1 = {0.0};
  CHECK(std::abs(lstail::solve_h_coeffs(b1, t1)[0] - 0.7) < 1e-14);

  // L=2, mismatch (0, 1): d = (-2, 2)
  std::vector<double> b2 = {0.0, 1.0}, t2 = {0.0, 0.0};
  auto d2 = lstail::solve_h_coeffs(b2, t2);
  REQUIRE(d2.size() == 2);
  CHECK(std::abs(d2[0] + 2.0) < 1e-12);
  CHECK(std::abs(d2[1] - 2.0) < 1e-12);
}

TEST_CASE("pareto pair reproduces its own transform") {
  // the comparison density with g = (1, 0) IS the pareto(1) density, so the
  // repair terms vanish and xi is numerically zero on the whole half plane
  auto dist = lstail::make_pareto(1.0);
  auto pair = lstail::build_correction(dist.known_singularity(2, 4), 2);
  REQUIRE(pair.d.size() == 2);
  CHECK(std::abs(pair.d[0]) < 1e-5);
  CHECK(std::abs(pair.d[1]) < 1e-5);

  auto phi = [&](cplx s) { return dist.phi_exact(s); };
  CHECK(std::abs(lstail::xi(phi, pair, cplx(0.5, 0.0))) < 1e-5);
  CHECK(std::abs(lstail::xi(phi, pair, cplx(0.3, 0.2))) < 1e-5);
  CHECK(std::abs(lstail::xi(phi, pair, cplx(0.0, 0.5))) < 1e-4);
}

TEST_CASE("mismatch remainder vanishes to the stated order") {
  auto dist = lstail::make_zeta_difference(2);
  auto pair = lstail::build_correction(dist.known_singularity(2, 2), 2);
  auto phi = [&](cplx s) { return dist.phi_exact(s); };
  double big = std::abs(lstail::xi(phi, pair, cplx(1e-2, 0.0)));
  double small = std::abs(lstail::xi(phi, pair, cplx(1e-3, 0.0)));
  // order-2 vanish: a decade in s buys (at least) a factor ~30
  CHECK(small < big / 30.0);
  CHECK(big < 1e-2);
  CHECK_THROWS_AS(lstail::xi(phi, pair, cplx(-0.2, 0.0)), lstail::DomainError);
}

TEST_CASE("pair construction validates sizes") {
  auto f = lstail::make_pareto(1.0).known_singularity(2, 1);
  CHECK_THROWS_AS(lstail::build_correction(f, 2), lstail::DomainError);
  std::vector<double> g_short = {1.0};
  CHECK_THROWS_AS(
      lstail::tilde_beta_coefficients(lstail::make_pareto(1.0).known_singularity(2, 2),
                                      g_short, 2),
      lstail::DomainError);
}
