#include "qlear/error.hpp"

namespace qlear {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonFiniteInput: return "NonFiniteInput";
    case Errc::ZeroTrace: return "ZeroTrace";
    case Errc::EigensolverFailure: return "EigensolverFailure";
    case Errc::InvalidQ: return "InvalidQ";
    case Errc::NonUnitVector: return "NonUnitVector";
    case Errc::KTooLarge: return "KTooLarge";
    case Errc::EmptyPool: return "EmptyPool";
    case Errc::SingleClass: return "SingleClass";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::ClassTooSmall: return "ClassTooSmall";
    case Errc::InvalidFraction: return "InvalidFraction";
    case Errc::PoolTooSmall: return "PoolTooSmall";
    case Errc::InvalidGrid: return "InvalidGrid";
    case Errc::UnknownLabel: return "UnknownLabel";
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::ParseError: return "ParseError";
    case Errc::InconsistentColumns: return "InconsistentColumns";
    case Errc::EmptyFile: return "EmptyFile";
    case Errc::SingleSample: return "SingleSample";
    case Errc::UnknownProblem: return "UnknownProblem";
    case Errc::IOError: return "IOError";
    case Errc::ConfigParseError: return "ConfigParseError";
    case Errc::ModelFormatError: return "ModelFormatError";
  }
  return "Unknown";
}

ErrorCategory category(Errc code) noexcept {
  switch (code) {
    case Errc::ZeroTrace:
    case Errc::EigensolverFailure:
      return ErrorCategory::Numeric;
    case Errc::InvalidQ:
    case Errc::InvalidParams:
    case Errc::InvalidFraction:
    case Errc::InvalidGrid:
    case Errc::UnknownProblem:
      return ErrorCategory::Usage;
    default:
      return ErrorCategory::Data;
  }
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace qlear
