#include "omerdf/rdf/term.hpp"

#include <algorithm>
#include <array>

#include "omerdf/error.hpp"

namespace omerdf::rdf {

namespace {

bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alnum(char c) { return is_alpha(c) || is_digit(c); }

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_digit);
}

std::string_view strip_sign(std::string_view s) {
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) s.remove_prefix(1);
  return s;
}

bool is_decimal_body(std::string_view s) {
  const auto dot = s.find('.');
  if (dot == std::string_view::npos) return is_digits(s);
  const auto whole = s.substr(0, dot);
  const auto frac = s.substr(dot + 1);
  if (whole.empty() && frac.empty()) return false;
  return (whole.empty() || is_digits(whole)) && (frac.empty() || is_digits(frac));
}

bool is_lang_tag(std::string_view tag) {
  std::size_t start = 0;
  bool first = true;
  while (true) {
    const auto dash = tag.find('-', start);
    const auto part = tag.substr(start, dash == std::string_view::npos
                                            ? std::string_view::npos
                                            : dash - start);
    if (part.empty() || part.size() > 8) return false;
    for (char c : part) {
      if (first ? !is_alpha(c) : !is_alnum(c)) return false;
    }
    first = false;
    if (dash == std::string_view::npos) return true;
    start = dash + 1;
  }
}

}  // namespace

Iri Iri::make(std::string_view value) {
  if (!is_valid(value)) {
    throw Error(ErrorCode::InvalidIri, "invalid IRI: '" + std::string(value) + "'");
  }
  return Iri(std::string(value));
}

bool Iri::is_valid(std::string_view value) noexcept {
  if (value.empty() || !is_alpha(value.front())) return false;
  const auto colon = value.find(':');
  if (colon == std::string_view::npos) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    const char c = value[i];
    if (!is_alnum(c) && c != '+' && c != '-' && c != '.') return false;
  }
  for (const char c : value) {
    const auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || u == 0x7f || c == '<' || c == '>' || c == '"') return false;
  }
  return true;
}

BlankNode BlankNode::make(std::string_view label) {
  if (!is_valid_label(label)) {
    throw Error(ErrorCode::InvalidBlankNode,
                "invalid blank node label: '" + std::string(label) + "'");
  }
  return BlankNode(std::string(label));
}

bool BlankNode::is_valid_label(std::string_view label) noexcept {
  return !label.empty() && is_alpha(label.front()) &&
         std::all_of(label.begin(), label.end(), is_alnum);
}

Iri vocab::iri(std::string_view value) { return Iri::make(value); }

NumericKind numeric_kind(std::string_view datatype) noexcept {
  if (!datatype.starts_with(vocab::kXsd)) return NumericKind::None;
  const auto local = datatype.substr(vocab::kXsd.size());
  static constexpr std::array<std::string_view, 13> kIntegers = {
      "integer",          "int",          "long",          "short",
      "byte",             "nonNegativeInteger",            "positiveInteger",
      "negativeInteger",  "nonPositiveInteger",            "unsignedInt",
      "unsignedLong",     "unsignedShort", "unsignedByte"};
  if (std::find(kIntegers.begin(), kIntegers.end(), local) != kIntegers.end()) {
    return NumericKind::Integer;
  }
  if (local == "decimal") return NumericKind::Decimal;
  if (local == "double" || local == "float") return NumericKind::Floating;
  return NumericKind::None;
}

bool is_numeric_lexical(NumericKind kind, std::string_view lexical) noexcept {
  switch (kind) {
    case NumericKind::None:
      return true;
    case NumericKind::Integer:
      return is_digits(strip_sign(lexical));
    case NumericKind::Decimal:
      return is_decimal_body(strip_sign(lexical));
    case NumericKind::Floating: {
      if (lexical == "INF" || lexical == "-INF" || lexical == "+INF" ||
          lexical == "NaN") {
        return true;
      }
      auto body = strip_sign(lexical);
      const auto e = body.find_first_of("eE");
      if (e == std::string_view::npos) return is_decimal_body(body);
      return is_decimal_body(body.substr(0, e)) &&
             is_digits(strip_sign(body.substr(e + 1)));
    }
  }
  return false;
}

Literal Literal::plain(std::string_view lexical) {
  return Literal(std::string(lexical), Iri::make(vocab::kXsdString), std::nullopt);
}

Literal Literal::typed(std::string_view lexical, Iri datatype) {
  if (datatype.value() == vocab::kLangString) {
    throw Error(ErrorCode::InvalidLiteral,
                "rdf:langString literal requires a language tag");
  }
  if (!is_numeric_lexical(numeric_kind(datatype.value()), lexical)) {
    throw Error(ErrorCode::InvalidLiteral,
                "lexical form '" + std::string(lexical) + "' is not valid for <" +
                    datatype.value() + ">");
  }
  return Literal(std::string(lexical), std::move(datatype), std::nullopt);
}

Literal Literal::lang(std::string_view lexical, std::string_view tag) {
  if (!is_lang_tag(tag)) {
    throw Error(ErrorCode::InvalidLiteral,
                "invalid language tag '" + std::string(tag) + "'");
  }
  return Literal(std::string(lexical), Iri::make(vocab::kLangString),
                 std::string(tag));
}

namespace {

void append_escaped(std::string& out, std::string_view s) {
  for (const char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
}

}  // namespace

std::string escape_lexical(std::string_view lexical) {
  std::string out;
  out.reserve(lexical.size());
  append_escaped(out, lexical);
  return out;
}

std::string to_ntriples(const Iri& iri) { return "<" + iri.value() + ">"; }

std::string to_ntriples(const Term& term) {
  if (const auto* iri = std::get_if<Iri>(&term)) return to_ntriples(*iri);
  if (const auto* bnode = std::get_if<BlankNode>(&term)) return "_:" + bnode->label();
  const auto& lit = std::get<Literal>(term);
  std::string out;
  out.reserve(lit.lexical().size() + lit.datatype().value().size() + 8);
  out += '"';
  append_escaped(out, lit.lexical());
  out += '"';
  if (lit.language()) {
    out += '@';
    out += *lit.language();
  } else {
    out += "^^<";
    out += lit.datatype().value();
    out += '>';
  }
  return out;
}

}  // namespace omerdf::rdf
