#include "densecap/errors.hpp"

namespace densecap {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInternal: return "internal";
    case ErrorKind::kNumeric: return "numeric";
    case ErrorKind::kData: return "data";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kRange: return "range";
    case ErrorKind::kConfig: return "config";
  }
  return "internal";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInternal:
    case ErrorKind::kNumeric:
      return 1;
    case ErrorKind::kData:
    case ErrorKind::kFormat:
    case ErrorKind::kRange:
      return 2;
    case ErrorKind::kConfig:
      return 3;
  }
  return 1;
}

}  // namespace densecap
