#pragma once

#include <stdexcept>
#include <string>

namespace horn {

// A requested enumeration or scan exceeds the configured resource caps.
class ResourceLimitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An iterative routine can no longer make progress within its contract.
class StuckStateError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Supplied data contradicts itself beyond the stated tolerance.
class InconsistentDataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An invariant that theory guarantees failed to hold; indicates a bug here.
class InternalError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

}  // namespace horn
