#pragma once

#include <stdexcept>
#include <string>

namespace slicekit {

// Bad caller input: dimensions, sizes, orders or ranges outside the contract.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An operation was asked to reuse state that does not exist.
class InvalidState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The SW2 gradient is undefined because the distance is (numerically) zero.
class DegenerateGradient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cholesky factorization failed even at the largest jitter.
class IllConditioned : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact solvers refuse inputs above their size guard.
class ProblemTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or truncated input files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slicekit
