#pragma once

#include <stdexcept>
#include <string>

namespace fclt {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyMeasureError : Error {
  using Error::Error;
};

struct DimensionMismatchError : Error {
  using Error::Error;
};

struct ExactSolverLimitError : Error {
  using Error::Error;
};

struct CostLimitError : Error {
  using Error::Error;
};

struct NotErgodicError : Error {
  using Error::Error;
};

struct InvalidBetaError : Error {
  using Error::Error;
};

struct ConvergenceFailureError : Error {
  using Error::Error;
};

struct UnsupportedError : Error {
  using Error::Error;
};

struct DegenerateError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace fclt
