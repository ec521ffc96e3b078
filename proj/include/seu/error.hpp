#pragma once

#include <stdexcept>
#include <string>

namespace seu {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the validity window of a physical model.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input object (material, grid, scenario, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Newton / transient / bisection failure.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace seu
