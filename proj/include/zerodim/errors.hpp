#pragma once

#include <stdexcept>
#include <string>

namespace zerodim {

// Failure classes. The CLI maps each one to its own exit code.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or an unsupported combination (k < 2, order above a cap, ...).
class usage_error : public error {
 public:
  using error::error;
};

// Point outside the domain where an operation is defined.
class domain_error : public error {
 public:
  using error::error;
};

// Determinant or matrix is zero where an inverse is needed.
class singular_error : public domain_error {
 public:
  using domain_error::domain_error;
};

// A multivalued function was asked to leave its validated sheet.
class branch_error : public domain_error {
 public:
  using domain_error::domain_error;
};

// Refinement stalled or a fit had nothing to work with.
class convergence_error : public error {
 public:
  using error::error;
};

}  // namespace zerodim
