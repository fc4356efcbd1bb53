#include "wpg/error.hpp"

namespace wpg {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInput: return "input error";
    case ErrorKind::kDecode: return "decode error";
    case ErrorKind::kEmptySequence: return "empty sequence";
    case ErrorKind::kGeometry: return "geometry error";
    case ErrorKind::kParameter: return "parameter error";
    case ErrorKind::kNumericalFailure: return "numerical failure";
    case ErrorKind::kFormat: return "format error";
    case ErrorKind::kIo: return "I/O error";
    case ErrorKind::kDegenerateDescriptor: return "degenerate descriptor";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

NumericalFailure::NumericalFailure(int iteration, const std::string& message)
    : Error(ErrorKind::kNumericalFailure,
            message + " (iteration " + std::to_string(iteration) + ")"),
      iteration_(iteration) {}

}  // namespace wpg
