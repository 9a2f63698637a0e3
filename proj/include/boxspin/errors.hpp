#pragma once

#include <stdexcept>
#include <string>

namespace boxspin {

enum class ErrorKind {
  InvalidState,
  NonFiniteIntegrand,
  InvalidScale,
  MisalignedGrid,
  GridMismatch,
  RangeError,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` tells callers what failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace boxspin
