#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace omerdf {

/// Every failure raised by the library carries one of these codes.
enum class ErrorCode {
  // rdf-model
  InvalidIri,
  InvalidLiteral,
  InvalidBlankNode,
  BlankNodeCollision,
  TooLargeForExactCheck,
  SyntaxError,
  UnsupportedConstruct,
  // xml / schema translation
  MalformedXml,
  EmptySchema,
  NameCollision,
  // ontology
  NotFound,
  InvalidRegistry,
  // ome-parser
  DanglingReference,
  MissingRequiredField,
  InvalidDimension,
  InvalidTimestamp,
  DuplicateId,
  UnknownColumn,
  BadHeader,
  BadValue,
  DuplicateImageId,
  OrphanAnnotation,
  // mapper
  EmptyLocalId,
  InvalidPolicy,
  UnresolvableStrain,
  UnknownClassInRegistry,
  // link-registry
  UnknownPrefix,
  MalformedCurie,
  IdPatternMismatch,
  InvalidLinkRegistry,
  // batch-ingest / io
  DirNotFound,
  IoError,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code);

/// Exception type used throughout. Parse errors also carry a 1-based
/// line/column position.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  /// Appends " (line N[, column M])" to the message.
  Error(ErrorCode code, const std::string& message, std::size_t line,
        std::optional<std::size_t> column);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }
  std::optional<std::size_t> column() const noexcept { return column_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
  std::optional<std::size_t> column_;
};

}  // namespace omerdf
