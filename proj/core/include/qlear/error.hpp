#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qlear {

enum class Errc {
  EmptyInput,
  DimensionMismatch,
  NonFiniteInput,
  ZeroTrace,
  EigensolverFailure,
  InvalidQ,
  NonUnitVector,
  KTooLarge,
  EmptyPool,
  SingleClass,
  InvalidParams,
  ClassTooSmall,
  InvalidFraction,
  PoolTooSmall,
  InvalidGrid,
  UnknownLabel,
  FileNotFound,
  ParseError,
  InconsistentColumns,
  EmptyFile,
  SingleSample,
  UnknownProblem,
  IOError,
  ConfigParseError,
  ModelFormatError,
};

std::string_view to_string(Errc code) noexcept;

/// Broad failure class used to pick the process exit code.
enum class ErrorCategory { Usage, Data, Numeric };

ErrorCategory category(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }
  /// Message without the error-code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace qlear
