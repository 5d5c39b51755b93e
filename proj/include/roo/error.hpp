#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "roo/span.hpp"

namespace roo {

enum class ErrorCode : std::uint8_t {
  // reader
  UnbalancedDelimiter,
  InvalidToken,
  OddMapLiteral,
  // schema registry
  MalformedSchemaFile,
  UnknownTypeTag,
  DanglingValidatorRef,
  DanglingCallbackRef,
  IllegalReturnType,
  SpecArityMismatch,
  // expander
  UnknownSchema,
  UnknownSpecialForm,
  BadRequireTarget,
  DuplicateNativeHeader,
  MalformedForm,
  UnresolvedSymbol,
  ArityError,
  StaticTypeError,
  NonStaticCallback,
  // codegen
  UnsupportedConstruct,
  TooManyCallbacks,
  MissingNativeHeader,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnbalancedDelimiter: return "UnbalancedDelimiter";
    case ErrorCode::InvalidToken: return "InvalidToken";
    case ErrorCode::OddMapLiteral: return "OddMapLiteral";
    case ErrorCode::MalformedSchemaFile: return "MalformedSchemaFile";
    case ErrorCode::UnknownTypeTag: return "UnknownTypeTag";
    case ErrorCode::DanglingValidatorRef: return "DanglingValidatorRef";
    case ErrorCode::DanglingCallbackRef: return "DanglingCallbackRef";
    case ErrorCode::IllegalReturnType: return "IllegalReturnType";
    case ErrorCode::SpecArityMismatch: return "SpecArityMismatch";
    case ErrorCode::UnknownSchema: return "UnknownSchema";
    case ErrorCode::UnknownSpecialForm: return "UnknownSpecialForm";
    case ErrorCode::BadRequireTarget: return "BadRequireTarget";
    case ErrorCode::DuplicateNativeHeader: return "DuplicateNativeHeader";
    case ErrorCode::MalformedForm: return "MalformedForm";
    case ErrorCode::UnresolvedSymbol: return "UnresolvedSymbol";
    case ErrorCode::ArityError: return "ArityError";
    case ErrorCode::StaticTypeError: return "StaticTypeError";
    case ErrorCode::NonStaticCallback: return "NonStaticCallback";
    case ErrorCode::UnsupportedConstruct: return "UnsupportedConstruct";
    case ErrorCode::TooManyCallbacks: return "TooManyCallbacks";
    case ErrorCode::MissingNativeHeader: return "MissingNativeHeader";
  }
  return "Unknown";
}

/// Process exit status for the first error of a given kind:
/// 2 read/parse, 3 schema, 4 expansion or static check.
constexpr int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnbalancedDelimiter:
    case ErrorCode::InvalidToken:
    case ErrorCode::OddMapLiteral:
      return 2;
    case ErrorCode::MalformedSchemaFile:
    case ErrorCode::UnknownTypeTag:
    case ErrorCode::DanglingValidatorRef:
    case ErrorCode::DanglingCallbackRef:
    case ErrorCode::IllegalReturnType:
    case ErrorCode::SpecArityMismatch:
      return 3;
    default:
      return 4;
  }
}

/// Compilation error carrying a kind and the offending source position.
/// Errors raised by layers without source text (e.g. registry lookup) are
/// unlocated; callers attach a position with `at()`.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  Error(ErrorCode code, std::string message, SourceSpan span)
      : std::runtime_error(std::move(message)), code_(code), span_(std::move(span)), located_(true) {}

  ErrorCode code() const noexcept { return code_; }
  const SourceSpan& span() const noexcept { return span_; }
  bool located() const noexcept { return located_; }

  Error& at(const SourceSpan& span) {
    if (!located_) {
      span_ = span;
      located_ = true;
    }
    return *this;
  }

  /// `<file>:<line>:<col>: <CODE>: <message>`
  std::string diagnostic() const {
    std::string out = span_.file.empty() ? std::string("<input>") : span_.file;
    out += ':' + std::to_string(span_.line) + ':' + std::to_string(span_.column) + ": ";
    out += to_string(code_);
    out += ": ";
    out += what();
    return out;
  }

 private:
  ErrorCode code_;
  SourceSpan span_;
  bool located_ = false;
};

}  // namespace roo
