#pragma once

#include <stdexcept>
#include <string>

namespace kappamax {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid sizes, mismatched dimensions, or malformed construction input.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Empty table or expected agreement equal to one: kappa is undefined.
class DegenerateTableError : public Error {
 public:
  using Error::Error;
};

/// Fiber enumeration exceeded the configured node budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace kappamax
