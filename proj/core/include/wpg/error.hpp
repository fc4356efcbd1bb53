#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wpg {

enum class ErrorKind {
  kInput,
  kDecode,
  kEmptySequence,
  kGeometry,
  kParameter,
  kNumericalFailure,
  kFormat,
  kIo,
  kDegenerateDescriptor,
};

std::string_view to_string(ErrorKind kind);

// Every library failure is reported through this type; callers that need to
// branch on the cause inspect kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Thrown by the graph solver; carries the iteration at which a non-finite
// value appeared.
class NumericalFailure : public Error {
 public:
  NumericalFailure(int iteration, const std::string& message);

  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

}  // namespace wpg
