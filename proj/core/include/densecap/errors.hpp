#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace densecap {

// Error categories. Each maps onto one CLI exit code (see exit_code()).
enum class ErrorKind { kInternal, kNumeric, kData, kFormat, kRange, kConfig };

std::string_view to_string(ErrorKind kind);

// 0 ok, 1 internal, 2 input/data, 3 config.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& m) : Error(ErrorKind::kInternal, m) {}
};

// Non-finite activations, logits or losses.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& m) : Error(ErrorKind::kNumeric, m) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& m) : Error(ErrorKind::kData, m) {}
};

class RangeError : public Error {
 public:
  explicit RangeError(const std::string& m) : Error(ErrorKind::kRange, m) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& m) : Error(ErrorKind::kConfig, m) {}
};

// Malformed binary or text file. Carries the byte offset where decoding failed.
class FormatError : public Error {
 public:
  FormatError(const std::string& m, std::uint64_t offset)
      : Error(ErrorKind::kFormat, m + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

}  // namespace densecap
