#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace azlab {

// Base class for everything this library throws on contract violations.
// Expected algorithmic failures (a Newton run hitting max iterations, a
// shooting bracket without a sign change) are reported through status
// values instead, so multistart drivers can keep going.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BadConfig : Error {
  using Error::Error;
};

// Hessian query at a point where the kernel is not twice differentiable
// (kappa = 0, p < 2, slope 0).
struct DegeneratePoint : Error {
  using Error::Error;
};

// Hessian assembly hit elements with (numerically) vanishing slope in the
// kappa = 0, p < 2 regime; the caller must go through the degenerate-set
// machinery instead.
struct DegenerateElement : Error {
  DegenerateElement(const std::string& what, std::vector<int> offending)
      : Error(what), elements(std::move(offending)) {}
  std::vector<int> elements;
};

struct Resonant : Error {
  using Error::Error;
};

struct TableTooShort : Error {
  using Error::Error;
};

struct FactorizationBreakdown : Error {
  using Error::Error;
};

struct ConvergenceFailure : Error {
  using Error::Error;
};

struct BlowUp : Error {
  using Error::Error;
};

struct BracketFailure : Error {
  using Error::Error;
};

struct NotCritical : Error {
  using Error::Error;
};

struct InfiniteIndex : Error {
  using Error::Error;
};

struct SolverFailure : Error {
  using Error::Error;
};

struct RegimeExcluded : Error {
  using Error::Error;
};

struct DimTooHigh : Error {
  using Error::Error;
};

struct MaxIterExceeded : Error {
  using Error::Error;
};

}  // namespace azlab
