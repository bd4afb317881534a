#pragma once

#include <stdexcept>
#include <string>

namespace blform {

/// Malformed input: unreadable files, dimension mismatches, exceeded caps.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& message) : std::runtime_error(message) {}
};

/// A documented hypothesis of the requested operation does not hold for the
/// given data (e.g. a non-generic vector set handed to an operation that
/// requires genericity).
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& message) : std::runtime_error(message) {}
};

/// A property the construction guarantees was found violated at runtime.
/// Indicates a bug in this library, never bad user input.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& message) : std::logic_error(message) {}
};

}  // namespace blform
