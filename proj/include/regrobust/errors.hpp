#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace regrobust {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ")"
                   : what),
        line(line),
        column(column) {}
  std::size_t line;
  std::size_t column;
};

struct MultipleEnabledTransitions : Error {
  using Error::Error;
};
struct UnboundedRegisterDomain : Error {
  using Error::Error;
};
struct IncompatibleGuards : Error {
  using Error::Error;
};
struct DisequalityPresent : Error {
  using Error::Error;
};
struct RefinementFailed : Error {
  using Error::Error;
};
struct GraphLimitExceeded : Error {
  using Error::Error;
};
struct MalformedModel : Error {
  using Error::Error;
};
struct SolverError : Error {
  using Error::Error;
};
struct BudgetExhausted : Error {
  using Error::Error;
};
struct EmptySampleSet : Error {
  using Error::Error;
};
struct OracleUnavailable : Error {
  using Error::Error;
};
struct SamplerExhausted : Error {
  using Error::Error;
};
struct QuotaUnreachable : Error {
  using Error::Error;
};

}  // namespace regrobust
