#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scalebench {

enum class ErrorKind {
  InsufficientData,
  DomainError,
  DegenerateSeries,
  UnstableSeries,
  ArithmeticError,
  DegenerateCalibration,
  EmptyReference,
  EmptyHypothesis,
  UnknownTable,
  DimensionError,
  EmptyStore,
  EmptySequence,
  SampleRateMismatch,
  IoError,
  UnsupportedFormat,
  SchemaError,
  UnknownLanguage,
  VersionError,
  UsageError,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DegenerateSeries: return "DegenerateSeries";
    case ErrorKind::UnstableSeries: return "UnstableSeries";
    case ErrorKind::ArithmeticError: return "ArithmeticError";
    case ErrorKind::DegenerateCalibration: return "DegenerateCalibration";
    case ErrorKind::EmptyReference: return "EmptyReference";
    case ErrorKind::EmptyHypothesis: return "EmptyHypothesis";
    case ErrorKind::UnknownTable: return "UnknownTable";
    case ErrorKind::DimensionError: return "DimensionError";
    case ErrorKind::EmptyStore: return "EmptyStore";
    case ErrorKind::EmptySequence: return "EmptySequence";
    case ErrorKind::SampleRateMismatch: return "SampleRateMismatch";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::UnknownLanguage: return "UnknownLanguage";
    case ErrorKind::VersionError: return "VersionError";
    case ErrorKind::UsageError: return "UsageError";
  }
  return "Unknown";
}

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

}  // namespace scalebench
