#pragma once

#include <stdexcept>
#include <string>

namespace lstail {

// Base for everything thrown by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the mathematical domain of an operation (bad r, Re s < 0,
// even L for a minorant, tau = 0 for the limit transform, ...).
struct DomainError : Error {
  using Error::Error;
};

// A tolerance could not be met (series truncation cap hit, fit residual too
// large, quadrature failed to converge).
struct AccuracyError : Error {
  using Error::Error;
};

// Model-fit could not decide between two candidates.
struct AmbiguityError : Error {
  double first_r, second_r;
  double first_residual, second_residual;
  AmbiguityError(const std::string& msg, double r1, double r2, double res1, double res2)
      : Error(msg), first_r(r1), second_r(r2), first_residual(res1), second_residual(res2) {}
};

// Evaluation hit a pole (pgf denominator vanished away from z=1).
struct SingularityError : Error {
  using Error::Error;
};

// A structural invariant failed (g_0 <= 0, conditioning blowup, ...).
struct InvariantError : Error {
  using Error::Error;
};

}  // namespace lstail
