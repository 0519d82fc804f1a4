#include "lstail/transform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lstail/error.hpp"
#include "lstail/quadrature.hpp"

namespace lstail {

int SingularityForm::r_floor() const {
  if (kind == Kind::power_log) return static_cast<int>(std::lround(r));
  return static_cast<int>(std::floor(r));
}

double SingularityForm::r_frac() const { return r - std::floor(r); }

cplx SingularityForm::singular_part(cplx s) const {
  cplx base = pow_principal(s, r);
  cplx lg = (kind == Kind::power_log) ? log_principal(s) : cplx(1.0);
  cplx acc = 0.0, sk = 1.0;
  for (double a : alpha) {
    acc += a * sk;
    sk *= s;
  }
  return acc * base * lg;
}

cplx phi_quadrature(const Distribution& dist, cplx s, double rel_tol) {
  if (s == cplx(0.0)) return 1.0;
  if (s.real() < 0.0) throw DomainError("phi_quadrature: Re s < 0");

  if (!dist.discrete()) {
    auto f = [&](double t) { return std::exp(-s * t) * dist.density(t); };
    auto bound = [&](double x) { return dist.tail(x); };
    return integrate_tail(f, 1.0, bound, rel_tol, 0.0).value;
  }

  cplx z = std::exp(-s);
  double az = std::min(std::abs(z), 1.0);
  cplx sum = 0.0, zn = 1.0;
  for (std::int64_t n = 0; n < 5000000; ++n) {
    sum += dist.pmf(n) * zn;
    zn *= z;
    double rem = dist.tail(static_cast<double>(n)) * std::pow(az, static_cast<double>(n + 1));
    if (rem < rel_tol * std::max(1e-6, std::abs(sum))) return sum;
  }
  throw AccuracyError("phi_quadrature: remaining-mass bound never met the tolerance");
}

double power_log_coefficient(int r) {
  if (r < 1) throw DomainError("power_log_coefficient: r must be a positive integer");
  double c = 1.0 / std::tgamma(r + 1.0);
  return (r % 2 == 1) ? c : -c;
}

cplx canonical_power_log(int r, cplx s) {
  return power_log_coefficient(r) * pow_principal(s, r) * log_principal(s);
}

double pure_power_coefficient(double r) {
  double r0 = std::floor(r), rf = r - r0;
  if (!(r > 0.0) || rf == 0.0)
    throw DomainError("pure_power_coefficient: r must be positive non-integer");
  double mag = kPi / (std::sin(kPi * rf) * std::tgamma(r + 1.0));
  return (static_cast<long long>(r0) % 2 == 0) ? -mag : mag;
}

cplx canonical_pure_power(double r, cplx s) {
  return pure_power_coefficient(r) * pow_principal(s, r);
}

cplx pgf_to_ls(std::span<const double> probs, cplx s, double rel_tol) {
  cplx z = std::exp(-s);
  double az = std::abs(z);
  if (az > 1.0 + 1e-12) throw DomainError("pgf_to_ls: Re s < 0");
  az = std::min(az, 1.0);
  cplx sum = 0.0, zn = 1.0;
  double mass = 0.0;
  for (double p : probs) {
    sum += p * zn;
    zn *= z;
    mass += p;
  }
  if (mass > 1.0 + 1e-9) throw DomainError("pgf_to_ls: coefficient mass exceeds 1");
  double rem = std::max(0.0, 1.0 - mass) * std::pow(az, static_cast<double>(probs.size()));
  if (rem > rel_tol * std::max(1e-6, std::abs(sum)))
    throw AccuracyError("pgf_to_ls: remaining mass too large for the requested tolerance");
  return sum;
}

FitResult fit_singularity(const std::vector<FitSample>& samples,
                          const std::vector<double>& r_candidates, int order) {
  if (samples.size() < r_candidates.size() + static_cast<std::size_t>(order) + 2)
    throw DomainError("fit_singularity: too few samples");
  if (r_candidates.empty()) throw DomainError("fit_singularity: no candidates");
  if (order < 1) throw DomainError("fit_singularity: order must be >= 1");

  std::vector<double> y(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].s > 0.0)) throw DomainError("fit_singularity: samples need s > 0");
    y[i] = samples[i].value;
  }

  struct Entry {
    double r;
    double residual;
    SingularityForm form;
  };
  std::vector<Entry> entries;
  for (double rc : r_candidates) {
    bool integer_r = std::abs(rc - std::round(rc)) < 1e-9;
    std::vector<std::vector<double>> cols(1 + order, std::vector<double>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) {
      double s = samples[i].s;
      double basis = std::pow(s, rc);
      if (integer_r) basis *= std::log(s);
      cols[0][i] = basis;
      double sj = 1.0;
      for (int j = 0; j < order; ++j) {
        cols[1 + j][i] = sj;
        sj *= s;
      }
    }
    double residual = 0.0;
    std::vector<double> coef = least_squares(cols, y, &residual);
    Entry e;
    e.r = rc;
    e.residual = residual;
    e.form.kind = integer_r ? SingularityForm::Kind::power_log
                            : SingularityForm::Kind::pure_power;
    e.form.r = integer_r ? std::round(rc) : rc;
    e.form.alpha = {coef[0]};
    e.form.beta.assign(coef.begin() + 1, coef.end());
    entries.push_back(std::move(e));
  }

  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.residual < b.residual; });
  FitResult out;
  out.form = entries[0].form;
  out.residual = entries[0].residual;
  out.runner_up_r = entries.size() > 1 ? entries[1].r : entries[0].r;
  out.runner_up_residual = entries.size() > 1 ? entries[1].residual : entries[0].residual;
  if (entries.size() > 1 && entries[1].residual < 2.0 * entries[0].residual) {
    std::ostringstream msg;
    msg << "fit_singularity: candidates r=" << entries[0].r << " and r=" << entries[1].r
        << " are not separated (residuals " << entries[0].residual << ", "
        << entries[1].residual << ")";
    throw AmbiguityError(msg.str(), entries[0].r, entries[1].r, entries[0].residual,
                         entries[1].residual);
  }
  return out;
}

bool sign_check(const SingularityForm& form) {
  if (form.alpha.empty() || form.alpha[0] == 0.0) return false;
  int parity = (form.kind == SingularityForm::Kind::power_log)
                   ? static_cast<int>(std::lround(form.r))
                   : static_cast<int>(std::floor(form.r));
  double expected = (parity % 2 == 1) ? 1.0 : -1.0;
  return form.alpha[0] * expected > 0.0;
}

}  // namespace lstail
