#include "omerdf/error.hpp"

namespace omerdf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidIri: return "InvalidIri";
    case ErrorCode::InvalidLiteral: return "InvalidLiteral";
    case ErrorCode::InvalidBlankNode: return "InvalidBlankNode";
    case ErrorCode::BlankNodeCollision: return "BlankNodeCollision";
    case ErrorCode::TooLargeForExactCheck: return "TooLargeForExactCheck";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnsupportedConstruct: return "UnsupportedConstruct";
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::EmptySchema: return "EmptySchema";
    case ErrorCode::NameCollision: return "NameCollision";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::InvalidRegistry: return "InvalidRegistry";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::MissingRequiredField: return "MissingRequiredField";
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::InvalidTimestamp: return "InvalidTimestamp";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownColumn: return "UnknownColumn";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::BadValue: return "BadValue";
    case ErrorCode::DuplicateImageId: return "DuplicateImageId";
    case ErrorCode::OrphanAnnotation: return "OrphanAnnotation";
    case ErrorCode::EmptyLocalId: return "EmptyLocalId";
    case ErrorCode::InvalidPolicy: return "InvalidPolicy";
    case ErrorCode::UnresolvableStrain: return "UnresolvableStrain";
    case ErrorCode::UnknownClassInRegistry: return "UnknownClassInRegistry";
    case ErrorCode::UnknownPrefix: return "UnknownPrefix";
    case ErrorCode::MalformedCurie: return "MalformedCurie";
    case ErrorCode::IdPatternMismatch: return "IdPatternMismatch";
    case ErrorCode::InvalidLinkRegistry: return "InvalidLinkRegistry";
    case ErrorCode::DirNotFound: return "DirNotFound";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

Error::Error(ErrorCode code, const std::string& message, std::size_t line,
             std::optional<std::size_t> column)
    : std::runtime_error(message + " (line " + std::to_string(line) +
                         (column ? ", column " + std::to_string(*column) : "") + ")"),
      code_(code),
      line_(line),
      column_(column) {}

}  // namespace omerdf
