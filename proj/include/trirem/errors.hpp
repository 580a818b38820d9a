#pragma once

#include <stdexcept>
#include <string>

namespace trirem {

// Caller broke a documented precondition (bad vertex, missing edge, ...).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A value fell outside the domain where a formula is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Draw requested from a sampler whose total weight is zero.
class EmptySamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Work refused because it would exceed a memory or time guard.
class ResourceGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact integer count did not fit in 64 bits.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// An internal consistency check failed; indicates a bookkeeping bug.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace trirem
