#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dfc {

/// Malformed map designator or expression. `position` is a 0-based offset
/// into the source text.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A value outside an operation's mathematical domain (division by zero,
/// violated precondition on numeric input).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation produced a non-finite number.
class OverflowError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace dfc
