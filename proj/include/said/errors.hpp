#pragma once

#include <stdexcept>
#include <string>

namespace said {

/// Invalid tunable (sigma <= 0, unknown method, zero-size output, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Caller broke an operation's precondition, e.g. mismatched plane sizes.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace said
