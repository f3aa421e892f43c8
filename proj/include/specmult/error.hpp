#pragma once

#include <stdexcept>
#include <string>

namespace specmult {

/// Malformed configuration or invalid argument supplied by a caller.
class SchemaError : public std::invalid_argument {
 public:
  explicit SchemaError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical routine could not produce a trustworthy result
/// (singular solve, eigensolver failure, ill-conditioned division).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace specmult
