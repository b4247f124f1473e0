#pragma once

#include <stdexcept>
#include <string>

namespace joincover {

/// Malformed or inconsistent input data.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class LpInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LpUnbounded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an exact/exhaustive routine is asked to exceed its size limit.
class DeskScaleLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace joincover
