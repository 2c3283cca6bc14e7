#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace omerdf::rdf {

/// An absolute IRI. Construction validates: non-empty, a scheme followed by
/// ':', no whitespace, control characters, '<', '>' or '"'.
class Iri {
 public:
  /// Throws Error(InvalidIri).
  static Iri make(std::string_view value);
  static bool is_valid(std::string_view value) noexcept;

  const std::string& value() const noexcept { return value_; }

  friend auto operator<=>(const Iri&, const Iri&) = default;
  friend bool operator==(const Iri&, const Iri&) = default;

 private:
  explicit Iri(std::string value) : value_(std::move(value)) {}
  std::string value_;
};

/// Blank node with a label matching [A-Za-z][A-Za-z0-9]*.
class BlankNode {
 public:
  /// Throws Error(InvalidBlankNode).
  static BlankNode make(std::string_view label);
  static bool is_valid_label(std::string_view label) noexcept;

  const std::string& label() const noexcept { return label_; }

  friend auto operator<=>(const BlankNode&, const BlankNode&) = default;
  friend bool operator==(const BlankNode&, const BlankNode&) = default;

 private:
  explicit BlankNode(std::string label) : label_(std::move(label)) {}
  std::string label_;
};

namespace vocab {
inline constexpr std::string_view kRdf =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";

inline constexpr std::string_view kRdfType =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kLangString =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
inline constexpr std::string_view kXsdString =
    "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view kXsdBoolean =
    "http://www.w3.org/2001/XMLSchema#boolean";
inline constexpr std::string_view kXsdInteger =
    "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view kXsdDecimal =
    "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr std::string_view kXsdDouble =
    "http://www.w3.org/2001/XMLSchema#double";
inline constexpr std::string_view kXsdPositiveInteger =
    "http://www.w3.org/2001/XMLSchema#positiveInteger";
inline constexpr std::string_view kXsdNonNegativeInteger =
    "http://www.w3.org/2001/XMLSchema#nonNegativeInteger";
inline constexpr std::string_view kXsdDateTime =
    "http://www.w3.org/2001/XMLSchema#dateTime";

Iri iri(std::string_view value);
}  // namespace vocab

/// Kinds of numeric XSD datatypes the literal validator knows about.
enum class NumericKind { None, Integer, Decimal, Floating };

NumericKind numeric_kind(std::string_view datatype) noexcept;

/// True when `lexical` is a valid lexical form for the numeric kind.
bool is_numeric_lexical(NumericKind kind, std::string_view lexical) noexcept;

/// A literal value. Language-tagged literals always have datatype
/// rdf:langString, and numeric datatypes carry parseable lexical forms.
class Literal {
 public:
  /// xsd:string literal.
  static Literal plain(std::string_view lexical);
  /// Throws Error(InvalidLiteral) for language-string datatype without a
  /// tag, or a numeric datatype with a non-numeric lexical form.
  static Literal typed(std::string_view lexical, Iri datatype);
  /// Throws Error(InvalidLiteral) for a malformed BCP-47 tag.
  static Literal lang(std::string_view lexical, std::string_view tag);

  const std::string& lexical() const noexcept { return lexical_; }
  const Iri& datatype() const noexcept { return datatype_; }
  const std::optional<std::string>& language() const noexcept {
    return language_;
  }

  friend auto operator<=>(const Literal&, const Literal&) = default;
  friend bool operator==(const Literal&, const Literal&) = default;

 private:
  Literal(std::string lexical, Iri datatype, std::optional<std::string> lang)
      : lexical_(std::move(lexical)),
        datatype_(std::move(datatype)),
        language_(std::move(lang)) {}

  std::string lexical_;
  Iri datatype_;
  std::optional<std::string> language_;
};

using Term = std::variant<Iri, BlankNode, Literal>;

inline bool is_iri(const Term& t) { return std::holds_alternative<Iri>(t); }
inline bool is_blank(const Term& t) {
  return std::holds_alternative<BlankNode>(t);
}
inline bool is_literal(const Term& t) {
  return std::holds_alternative<Literal>(t);
}

/// Escapes backslash, double quote, LF and CR for a quoted lexical form.
std::string escape_lexical(std::string_view lexical);

/// N-Triples rendering of a single term.
std::string to_ntriples(const Term& term);
std::string to_ntriples(const Iri& iri);

}  // namespace omerdf::rdf
