#include "lstail/mg1.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "lstail/error.hpp"

namespace lstail {

double normalize_pi0(double mean_a, double mean_b) {
  if (!(mean_a < 1.0)) throw DomainError("normalize_pi0: increment mean must be below 1");
  if (!(mean_b >= 0.0)) throw DomainError("normalize_pi0: restart mean must be finite");
  return (1.0 - mean_a) / (1.0 + mean_b - mean_a);
}

Mg1Model make_mg1_model(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("mg1: empty pmf");
  if (!(a[0] > 0.0)) throw DomainError("mg1: a_0 must be positive");
  for (double v : a)
    if (v < 0.0) throw DomainError("mg1: negative a entry");
  for (double v : b)
    if (v < 0.0) throw DomainError("mg1: negative b entry");
  double ma = 0.0, sa = 0.0, mb = 0.0, sb = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    sa += a[n];
    ma += static_cast<double>(n) * a[n];
  }
  for (std::size_t n = 0; n < b.size(); ++n) {
    sb += b[n];
    mb += static_cast<double>(n) * b[n];
  }
  if (sa > 1.0 + 1e-9 || sb > 1.0 + 1e-9) throw DomainError("mg1: pmf mass exceeds 1");
  Mg1Model m;
  m.a = std::move(a);
  m.b = std::move(b);
  m.mean_a = ma;
  m.mean_b = mb;
  m.pi0 = normalize_pi0(ma, mb);
  return m;
}

Mg1Model make_mg1_zeta_service(int r, double mean_a, std::size_t n_b) {
  if (r < 2) throw DomainError("mg1 zeta service: needs r >= 2 for a finite restart mean");
  if (!(mean_a > 0.0) || !(mean_a < 1.0))
    throw DomainError("mg1 zeta service: increment mean must lie in (0, 1)");
  if (n_b < 100) throw DomainError("mg1 zeta service: restart truncation too short");
  double q = mean_a / (1.0 + mean_a);
  std::size_t n_a = static_cast<std::size_t>(std::ceil(std::log(1e-12) / std::log(q)));
  std::vector<double> a(n_a);
  double w = 1.0 - q;
  for (std::size_t n = 0; n < n_a; ++n) {
    a[n] = w;
    w *= q;
  }
  Mg1Model m = make_mg1_model(std::move(a), zeta_diff_pmf_table(r, n_b));
  m.b_tail_exponent = -static_cast<double>(r);
  return m;
}

cplx pk_pgf(const Mg1Model& model, cplx z) {
  auto poly = [&](const std::vector<double>& c) {
    cplx acc = 0.0, zn = 1.0;
    for (double v : c) {
      acc += v * zn;
      zn *= z;
    }
    return acc;
  };
  if (std::abs(z - 1.0) < 1e-9) return 1.0;
  cplx A = poly(model.a), B = poly(model.b);
  cplx den = z - A;
  if (std::abs(den) < 1e-12) throw SingularityError("pk_pgf: z - A(z) vanished away from z = 1");
  return model.pi0 * (z * B - A) / den;
}

std::vector<double> pi_coefficients(const Mg1Model& model, std::size_t N) {
  const std::vector<double>& a = model.a;
  const std::vector<double>& b = model.b;
  if (b.size() < N + 1) throw DomainError("pi_coefficients: restart pmf truncated too short");
  auto e = [&](std::size_t n) -> double {
    double v = n < a.size() ? -a[n] : 0.0;
    return n == 1 ? 1.0 + v : v;
  };
  std::vector<double> pi(N + 1);
  for (std::size_t n = 0; n <= N; ++n) {
    double c = model.pi0 * ((n >= 1 ? b[n - 1] : 0.0) - (n < a.size() ? a[n] : 0.0));
    double acc = c;
    std::size_t j_lo = (n > a.size()) ? n - a.size() : 0;  // e(n-j) = 0 below this
    for (std::size_t j = j_lo; j < n; ++j) acc -= pi[j] * e(n - j);
    double v = acc / e(0);
    if (v < -1e-10) throw AccuracyError("pi_coefficients: recursion produced a negative mass");
    pi[n] = std::max(v, 0.0);
  }
  return pi;
}

std::vector<double> chain_oracle(const Mg1Model& model, std::size_t N) {
  // Solve a truncation several times deeper than the requested window so the
  // renormalized mass lost past the corner stays below the comparison floor;
  // only the first N+1 entries are returned.
  const long long want = static_cast<long long>(N) + 1;
  const long long dim =
      std::max(want, std::min<long long>(static_cast<long long>(model.b.size()), 4 * want));
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(model.a.size() * N + N + model.b.size());

  // transposed transition matrix minus identity, rows renormalized first
  auto add_row = [&](long long i, const std::vector<std::pair<long long, double>>& entries) {
    double mass = 0.0;
    for (const auto& [j, v] : entries) mass += v;
    if (!(mass > 0.0)) throw InvariantError("chain_oracle: empty truncated row");
    for (const auto& [j, v] : entries)
      if (j != dim - 1) trip.emplace_back(static_cast<int>(j), static_cast<int>(i), v / mass);
  };
  {
    std::vector<std::pair<long long, double>> row;
    for (long long j = 0; j < dim && j < static_cast<long long>(model.b.size()); ++j)
      row.emplace_back(j, model.b[static_cast<std::size_t>(j)]);
    add_row(0, row);
  }
  for (long long i = 1; i < dim; ++i) {
    std::vector<std::pair<long long, double>> row;
    for (std::size_t k = 0; k < model.a.size(); ++k) {
      long long j = i - 1 + static_cast<long long>(k);
      if (j < dim) row.emplace_back(j, model.a[k]);
    }
    add_row(i, row);
  }
  for (long long i = 0; i < dim - 1; ++i)
    trip.emplace_back(static_cast<int>(i), static_cast<int>(i), -1.0);
  for (long long j = 0; j < dim; ++j)
    trip.emplace_back(static_cast<int>(dim - 1), static_cast<int>(j), 1.0);

  Eigen::SparseMatrix<double> M(dim, dim);
  M.setFromTriplets(trip.begin(), trip.end());
  M.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(M);
  if (lu.info() != Eigen::Success) throw AccuracyError("chain_oracle: factorization failed");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  rhs(dim - 1) = 1.0;
  Eigen::VectorXd sol = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw AccuracyError("chain_oracle: solve failed");
  std::vector<double> pi(static_cast<std::size_t>(want));
  for (long long i = 0; i < want; ++i) pi[static_cast<std::size_t>(i)] = std::max(sol(i), 0.0);
  return pi;
}

Mg1Report mg1_tail_report(const Mg1Model& model, std::size_t N) {
  Mg1Report rep;
  rep.pi = pi_coefficients(model, N);
  rep.pi0 = model.pi0;

  std::vector<double> ns, ps;
  for (std::size_t n = 1; n <= N; ++n) {
    if (rep.pi[n] > 0.0) {
      ns.push_back(static_cast<double>(n));
      ps.push_back(rep.pi[n]);
    }
  }
  DecayFit fit = decay_rate_estimate(ns, ps);
  rep.eta_pi = fit.slope;

  if (model.b_tail_exponent != 0.0) {
    rep.eta_b = model.b_tail_exponent;
  } else {
    std::vector<double> xs, ts;
    double tail = 1.0;
    for (std::size_t n = 0; n + 1 < model.b.size(); ++n) {
      tail -= model.b[n];
      if (n >= 1 && tail > 0.0) {
        xs.push_back(static_cast<double>(n));
        ts.push_back(tail);
      }
    }
    rep.eta_b = decay_rate_estimate(xs, ts).slope;
  }

  double mass = std::accumulate(rep.pi.begin(), rep.pi.end(), 0.0);
  double slope_mag = std::abs(rep.eta_pi);
  if (slope_mag > 1.0)
    mass += rep.pi[N] * static_cast<double>(N) / (slope_mag - 1.0);
  rep.mass = mass;
  rep.verdict = std::abs(rep.eta_pi - rep.eta_b) <= 0.15;
  return rep;
}

}  // namespace lstail
