#pragma once

#include <stdexcept>
#include <string>

namespace hamsync {

/// Caller broke a documented precondition (length mismatch, value out of range).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Something that must hold by construction did not.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A randomized search exceeded its retry cap.
class ProbabilisticFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Request is valid but beyond what the implementation enumerates.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Protocol run could not complete: deadlock, or a party raised.
class ExecutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Socket-level failure (refused, reset, short read, timeout).
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Experiment configuration rejected before any run starts.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractViolation(message);
}

}  // namespace hamsync
