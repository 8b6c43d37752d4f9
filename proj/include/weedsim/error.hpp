#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace weedsim {

enum class ErrorKind {
  EmptyPattern,
  DegenerateGeometry,
  GridMismatch,
  InvalidField,
  InvalidArgument,
  NotNormalized,
  ZeroIntensity,
  BandwidthSelectionFailed,
  LambdaMaxViolation,
  InvalidStart,
  MissingMeasure,
  IngestError,
  AggregationMismatch,
  InvalidConfig,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised while parsing text inputs. line() is 1-based, 0 when not tied to a line.
class IngestError : public Error {
 public:
  IngestError(std::string source, std::size_t line, const std::string& message);

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

}  // namespace weedsim
