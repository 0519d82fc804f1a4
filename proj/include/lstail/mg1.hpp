#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lstail/distribution.hpp"
#include "lstail/tailbound.hpp"

namespace lstail {

// Discrete-time M/G/1-type chain on {0,1,2,...}: from state 0 the next state
// follows b; from state i >= 1 it is i - 1 + (a-distributed increment).
// Stationary pgf: pi(z) = pi0 (z B(z) - A(z))/(z - A(z)).
struct Mg1Model {
  std::vector<double> a;  // light-tailed increment pmf (truncated)
  std::vector<double> b;  // heavy-tailed restart pmf (long truncation)
  double mean_a{0.0};
  double mean_b{0.0};
  double pi0{0.0};
  double b_tail_exponent{0.0};  // -r of the b tail, 0 if unknown
};

// pi0 from pgf normalization at z -> 1 (L'Hopital): (1 - abar)/(1 + bbar - abar).
double normalize_pi0(double mean_a, double mean_b);

// Geometric a with mean abar truncated at tail mass <= 1e-12, b from the
// zeta-difference catalog member materialized to n_b terms.
Mg1Model make_mg1_zeta_service(int r, double mean_a, std::size_t n_b);
Mg1Model make_mg1_model(std::vector<double> a, std::vector<double> b);

// pi(z) for |z| < 1.  Denominator magnitude below 1e-12 away from z = 1
// raises SingularityError.
cplx pk_pgf(const Mg1Model& model, cplx z);

// pi_0..pi_N by triangular power-series division of the pgf (Cauchy
// recursion).  Values below -1e-10 raise AccuracyError; tiny negatives are
// clipped to 0.
std::vector<double> pi_coefficients(const Mg1Model& model, std::size_t N);

// Independent oracle: stationary vector of the (N+1)x(N+1) northwest
// truncation of the transition matrix, rows renormalized, sparse LU solve.
std::vector<double> chain_oracle(const Mg1Model& model, std::size_t N);

struct Mg1Report {
  double eta_pi;   // log-log slope of pi_n itself over the top decade
  double eta_b;    // b tail exponent -r
  double pi0;
  double mass;     // sum pi_n + estimated remainder
  bool verdict;    // |eta_pi - eta_b| <= 0.15
  std::vector<double> pi;
};

// The stationary pmf decays one power slower than the service pmf: a service
// tail n^{-r} drives pi_n ~ C n^{-r}.  The report fits pi_n directly and
// compares against -r.
Mg1Report mg1_tail_report(const Mg1Model& model, std::size_t N);

}  // namespace lstail
