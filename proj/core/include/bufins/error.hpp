#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bufins {

/// Base class for every recoverable error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document (bad JSON, wrong field type, unknown key or unit).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a model invariant. The message names the
/// offending entity.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration refused because the assignment space is too large.
class CapExceeded : public Error {
 public:
  CapExceeded(std::uint64_t count, std::uint64_t cap)
      : Error("brute force refused: " + std::to_string(count) +
              " assignments exceed cap " + std::to_string(cap)),
        count_(count),
        cap_(cap) {}

  std::uint64_t count() const { return count_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t count_;
  std::uint64_t cap_;
};

/// A checked algorithmic invariant failed. Indicates a bug, not bad input.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace bufins
