#pragma once

#include <stdexcept>
#include <string>

namespace lcalim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands live on different groups (kind, prime or working depth differ).
class GroupMismatch : public Error {
 public:
  using Error::Error;
};

// A character, neighborhood or cylinder needs digits/coordinates beyond the
// working depth of the element.
class DepthOverflow : public Error {
 public:
  using Error::Error;
};

// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// A config or report file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lcalim
