#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace advqa {

enum class ErrorCode {
  MalformedJson,
  SchemaViolation,
  OffsetMismatch,
  DuplicateId,
  EmptyDataset,
  IneligibleExample,
  UnmappableSpan,
  InsufficientData,
  EmptyBatch,
  NonFiniteInput,
  OutOfBounds,
  DivergenceDetected,
  UnsupportedFormat,
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorCode code);

// All data-level failures raised by the toolkit. The CLI maps these to exit
// code 2; anything else escaping a subcommand is a bug.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace advqa
