#pragma once

#include <stdexcept>
#include <string>

namespace cq {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Integrator produced NaN/Inf; usually a step-control failure.
struct NonFinite : Error {
  using Error::Error;
};

// Shooting parameter outside the admissible bracket.
struct BracketViolation : Error {
  using Error::Error;
};

struct BracketEmpty : Error {
  using Error::Error;
};

struct NoConvergence : Error {
  using Error::Error;
};

struct GridTooCoarse : Error {
  using Error::Error;
};

struct ProfileTooShort : Error {
  using Error::Error;
};

struct InsufficientRows : Error {
  using Error::Error;
};

struct NotBracketed : Error {
  using Error::Error;
};

struct CurveGap : Error {
  using Error::Error;
};

struct InfeasiblePair : Error {
  using Error::Error;
};

struct BetaNonpositive : Error {
  using Error::Error;
};

struct NoRoot : Error {
  using Error::Error;
};

struct PreconditionViolated : Error {
  using Error::Error;
};

struct TargetBelowMass : Error {
  using Error::Error;
};

}  // namespace cq
