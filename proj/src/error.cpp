#include "weedsim/error.hpp"

namespace weedsim {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyPattern: return "EmptyPattern";
    case ErrorKind::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::InvalidField: return "InvalidField";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::ZeroIntensity: return "ZeroIntensity";
    case ErrorKind::BandwidthSelectionFailed: return "BandwidthSelectionFailed";
    case ErrorKind::LambdaMaxViolation: return "LambdaMaxViolation";
    case ErrorKind::InvalidStart: return "InvalidStart";
    case ErrorKind::MissingMeasure: return "MissingMeasure";
    case ErrorKind::IngestError: return "IngestError";
    case ErrorKind::AggregationMismatch: return "AggregationMismatch";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

namespace {
std::string ingest_message(const std::string& source, std::size_t line, const std::string& message) {
  std::string out = source;
  if (line > 0) out += ":" + std::to_string(line);
  return out + ": " + message;
}
}  // namespace

IngestError::IngestError(std::string source, std::size_t line, const std::string& message)
    : Error(ErrorKind::IngestError, ingest_message(source, line, message)),
      source_(std::move(source)),
      line_(line) {}

}  // namespace weedsim
