#pragma once

#include <stdexcept>
#include <string>

namespace ckloci {

/// Raised when the available p-adic precision cannot certify a result.
/// Batch drivers catch this and retry at a higher working precision.
class PrecisionError : public std::runtime_error {
 public:
  explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an argument lies outside the domain of a function
/// (a non-unit passed to the logarithm, a point in the residue disc of 1, ...).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised by the Steinberg solver when no decomposition exists over the
/// requested smoothness bound. Callers raise the bound and retry.
class InsufficientBound : public std::runtime_error {
 public:
  explicit InsufficientBound(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed text input (p-adic expansions, rational strings, JSON payloads).
class ParseError : public std::invalid_argument {
 public:
  explicit ParseError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace ckloci
