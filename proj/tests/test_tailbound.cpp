#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "lstail/correction.hpp"
#include "lstail/distribution.hpp"
#include "lstail/error.hpp"
#include "lstail/special.hpp"
#include "lstail/tailbound.hpp"

namespace {

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i)
    xs[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return xs;
}

// Fixed-step Simpson on [a, b].
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2 == 1) ++n;
  double h = (b - a) / n, acc = f(a) + f(b);
  for (int j = 1; j < n; ++j) acc += f(a + j * h) * (j % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("decay rate of a clean power law") {
  auto xs = log_spaced(10.0, 1e4, 40);
  std::vector<double> ps(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ps[i] = 3.0 * std::pow(xs[i], -2.5);
  auto fit = lstail::decay_rate_estimate(xs, ps);
  CHECK(std::abs(fit.slope + 2.5) < 1e-12);
  CHECK(fit.points_used >= 3);

  // multiplicative noise moves the slope only slightly
  for (std::size_t i = 0; i < ps.size(); ++i) ps[i] *= (i % 2 == 0) ? 1.01 : 0.99;
  CHECK(std::abs(lstail::decay_rate_estimate(xs, ps).slope + 2.5) < 0.02);
}

TEST_CASE("decay rate input validation") {
  std::vector<double> xs = {1.0, 2.0, 3.0}, ps = {1.0, 0.5, 0.25};
  CHECK_THROWS_AS(lstail::decay_rate_estimate(xs, ps), lstail::DomainError);
  auto xn = log_spaced(10.0, 20.0, 15);  // spans less than two decades
  std::vector<double> pn(xn.size(), 0.5);
  CHECK_THROWS_AS(lstail::decay_rate_estimate(xn, pn), lstail::DomainError);
  auto xz = log_spaced(1.0, 1e3, 15);
  std::vector<double> pz(xz.size(), 0.0);
  CHECK_THROWS_AS(lstail::decay_rate_estimate(xz, pz), lstail::DomainError);
}

TEST_CASE("convolution kernel stays bounded") {
  auto xs = log_spaced(1e2, 1e4, 15);
  auto rows = lstail::appendix_a1(2.0, 3.0, xs);
  REQUIRE(rows.size() == xs.size());

  // direct Simpson oracle at x = 100
  double x = 100.0;
  auto f = [&](double t) { return std::pow(x - t, -2.0) * std::pow(t, -3.0); };
  double want = std::pow(x, 2.0) * simpson(f, 1.0, x - 1.0, 200000);
  CHECK(std::abs(rows[0].second - want) < 1e-6 * std::abs(want));

  // boundedness: log-log trend of the scaled values is flat
  std::vector<double> vx, vy;
  for (auto& [xx, v] : rows) {
    vx.push_back(xx);
    vy.push_back(v);
  }
  CHECK(std::abs(lstail::decay_rate_estimate(vx, vy).slope) <= 0.02);
}

TEST_CASE("exponential kernel limit is 1/k") {
  auto xs = log_spaced(10.0, 1e3, 12);
  for (double k : {1.0, 2.0}) {
    auto rows = lstail::appendix_a2(k, 2.0, xs);
    double at_end = rows.back().second;
    CHECK(std::abs(at_end - 1.0 / k) < 0.01 / k);
  }
  // Simpson oracle at x = 50, k = 1
  double x = 50.0;
  auto f = [&](double t) { return std::exp(-t) * std::pow(x - t, -2.0); };
  double want = std::pow(x, 2.0) * simpson(f, 0.0, x - 1.0, 400000);
  std::vector<double> one = {x};
  auto rows = lstail::appendix_a2(1.0, 2.0, one);
  CHECK(std::abs(rows[0].second - want) < 1e-5 * want);
}

TEST_CASE("slow-decay cross check converges from both sides") {
  auto dist = lstail::make_pareto(0.5);
  auto xs = log_spaced(1e2, 1e4, 7);
  auto pts = lstail::korevaar_check(dist, xs);
  REQUIRE(pts.size() == xs.size());
  for (const auto& p : pts) CHECK(std::abs(p.left + 1.0) < 1e-12);
  // transform-side estimate closes in on the same constant
  CHECK(std::abs(pts.back().right + 1.0) < 0.02);
  CHECK(std::abs(pts.back().right + 1.0) < std::abs(pts.front().right + 1.0));
}

TEST_CASE("exponential tilt identity approaches the tail from below") {
  // e^{L s2 x} int_x^inf e^{-L s2 t} dF(t) rises to P(X > x) as s2 -> 0+
  const int L = 2;
  const double s2s[] = {1e-2, 1e-3, 1e-4};

  // pareto(1): the tilted integral is E_2(ax)/x exactly
  {
    double x = 20.0, tail = 1.0 / x;
    double prev = 0.0;
    for (double s2 : s2s) {
      double a = L * s2;
      double j = std::exp(a * x) * lstail::exp_integral_e(2.0, a * x).real() / x;
      CHECK(j < tail);
      CHECK(j > prev);
      prev = j;
    }
    CHECK(std::abs(prev / tail - 1.0) < 0.03);
  }

  // lattice member: direct tilted pmf sum
  {
    auto dist = lstail::make_zeta_difference(2);
    double x = 20.5, tail = dist.tail(x);
    double prev = 0.0;
    for (double s2 : s2s) {
      double a = L * s2;
      double j = 0.0;
      for (long long n = 21; n <= 500000; ++n) j += std::exp(a * (x - n)) * dist.pmf(n);
      CHECK(j < tail);
      CHECK(j > prev);
      prev = j;
    }
    CHECK(std::abs(prev / tail - 1.0) < 0.05);
  }
}

TEST_CASE("bound engine sandwiches the exact tail") {
  auto dist = lstail::make_pareto(1.0);
  auto pair = lstail::build_correction(dist.known_singularity(1, 1), 1);
  lstail::BoundSettings set;
  set.L = 1;
  set.tau_points_per_cell = 16;
  set.quad_rel_tol = 1e-7;
  lstail::BoundEngine engine(dist, pair, set);
  CHECK(engine.upper_order() == 1);
  CHECK(engine.lower_order() == 1);
  for (double x : {50.0, 200.0}) {
    double exact = dist.tail(x);
    double up = engine.upper(x);
    double lo = engine.lower(x);
    CHECK(lo <= exact * (1.0 + 1e-9));
    CHECK(exact <= up * (1.0 + 1e-9));
    CHECK(up < 4.0 * exact);
    CHECK(lo > 0.25 * exact);
  }
}

TEST_CASE("full pipeline on a short window") {
  lstail::BoundSettings set;
  set.tau_points_per_cell = 24;
  set.quad_rel_tol = 1e-7;
  auto rep = lstail::theorem_check(lstail::make_pareto(1.0), 2, 10.0, 1e3, 12, &set,
                                   /*use_exact_form=*/true);
  REQUIRE(rep.x.size() == 12);
  CHECK(rep.r_used == 1.0);
  CHECK(rep.sign_check_passed);
  CHECK(rep.sandwich_ok);
  CHECK(std::abs(rep.eta_exact + 1.0) < 0.05);
  CHECK(std::abs(rep.eta_upper + 1.0) < 0.3);
  CHECK(std::abs(rep.eta_lower + 1.0) < 0.3);
  for (std::size_t i = 0; i < rep.x.size(); ++i) {
    CHECK(rep.lower[i] <= rep.tail_exact[i] * (1.0 + 1e-9));
    CHECK(rep.tail_exact[i] <= rep.upper[i] * (1.0 + 1e-9));
    CHECK(rep.scaled_upper[i] == rep.upper[i] * std::pow(rep.x[i], rep.r_used));
  }
}
