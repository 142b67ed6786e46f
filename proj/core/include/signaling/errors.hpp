#pragma once

#include <stdexcept>
#include <string>

namespace signaling {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent caller input.
class InputError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a function (e.g. negative effort).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Argument outside a tabulated range.
class RangeError : public Error {
 public:
  using Error::Error;
};

// An explicit resource cap was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// A result that should exist by construction does not.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// Root finding failed; carries the last bracket.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double lo, double hi)
      : Error(what + " (last bracket [" + std::to_string(lo) + ", " +
              std::to_string(hi) + "])"),
        lo_(lo),
        hi_(hi) {}

  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_;
  double hi_;
};

}  // namespace signaling
