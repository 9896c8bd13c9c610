#pragma once

#include <stdexcept>
#include <string>

namespace ghd {

// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-range input (length mismatch, parameter outside its domain).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Problem size exceeds what a dense/exhaustive routine can hold.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A requested quantity does not exist at this size, or a sampler's acceptance
// rate is below its floor.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// A protocol behaved outside its declared contract (e.g. sent more bits than declared).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace ghd
