#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "omerdf/ontology/ontology.hpp"
#include "omerdf/rdf/graph.hpp"

namespace omerdf::validator {

enum class ViolationCode {
  UnknownClass,
  UnknownProperty,
  DomainMismatch,
  RangeMismatch,
  CardinalityMin,
  CardinalityMax,
  BadDatatype,
  ValueOutOfRange,
  UntypedSubject,
};

/// "UNKNOWN_CLASS", "CARDINALITY_MIN", ...
std::string_view to_string(ViolationCode c);
std::optional<ViolationCode> parse_violation_code(std::string_view s);
inline constexpr std::size_t kViolationCodeCount = 9;

struct Violation {
  ViolationCode code;
  rdf::Term subject;
  std::string detail;

  friend auto operator<=>(const Violation&, const Violation&) = default;
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  /// Sorted by (code, subject, detail), no duplicates.
  std::vector<Violation> violations;
  std::size_t checked_triples = 0;
  bool passed = true;
};

struct ValidateOptions {
  /// IRI prefixes of partner databases. Nodes under them are opaque links:
  /// never required to be typed and never range-checked.
  std::vector<std::string> external_namespaces;
};

/// Closed-world check of an instance graph against the registry.
///
/// Untyped subjects report UNTYPED_SUBJECT once and nothing else about
/// their own properties. Subjects typed only with unregistered classes
/// report UNKNOWN_CLASS and skip domain and cardinality checks. Object IRIs
/// that carry no type are treated as links and skip range checks.
ValidationReport validate(const rdf::Graph& g, const ontology::OntologyRegistry& r,
                          const ValidateOptions& opts = {});

/// "CODE <subject>: detail".
std::string explain(const Violation& v);

/// One `code<TAB>subject<TAB>detail` line per violation, no header.
std::string format_report_tsv(const ValidationReport& report);
/// One explain() line per violation followed by a summary line.
std::string format_report_text(const ValidationReport& report);

}  // namespace omerdf::validator
