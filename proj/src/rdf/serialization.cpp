#include "omerdf/rdf/serialization.hpp"

#include <algorithm>
#include <cstdint>
#include <cctype>
#include <map>

#include "omerdf/error.hpp"

namespace omerdf::rdf {

std::string_view to_string(Format format) {
  return format == Format::Turtle ? "turtle" : "ntriples";
}

std::optional<Format> parse_format(std::string_view name) {
  if (name == "turtle" || name == "ttl") return Format::Turtle;
  if (name == "ntriples" || name == "nt") return Format::NTriples;
  return std::nullopt;
}

std::optional<Format> format_from_path(std::string_view path) {
  if (path.ends_with(".ttl")) return Format::Turtle;
  if (path.ends_with(".nt")) return Format::NTriples;
  return std::nullopt;
}

std::vector<std::string> canonical_lines(const Graph& g) {
  std::vector<std::string> lines;
  lines.reserve(g.size());
  for (const auto& t : g.triples()) lines.push_back(to_ntriples(t));
  std::sort(lines.begin(), lines.end());
  return lines;
}

// ---------------------------------------------------------------------------
// Turtle writer

namespace {

bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_simple_local(std::string_view local) {
  if (local.empty()) return true;
  if (local.front() == '-') return false;
  return std::all_of(local.begin(), local.end(), [](char c) {
    return is_alpha(c) || is_digit(c) || c == '_' || c == '-';
  });
}

class TurtleWriter {
 public:
  explicit TurtleWriter(const Graph& g) : g_(g) {}

  std::string write() {
    std::string out;
    for (const auto& [prefix, ns] : g_.prefixes()) {
      out += "@prefix " + prefix + ": <" + ns.value() + "> .\n";
    }
    if (g_.empty()) return out;
    if (!g_.prefixes().empty()) out += '\n';

    // std::set order groups triples by subject, subjects ordered by IRI.
    const auto& triples = g_.triples();
    bool first_block = true;
    for (auto it = triples.begin(); it != triples.end();) {
      auto end = std::find_if(it, triples.end(), [&](const Triple& t) {
        return t.subject() != it->subject();
      });
      if (!first_block) out += '\n';
      first_block = false;
      write_block(out, it, end);
      it = end;
    }
    return out;
  }

 private:
  std::string iri(const Iri& iri) const {
    const auto& v = iri.value();
    const std::string* best_prefix = nullptr;
    std::size_t best_len = 0;
    for (const auto& [prefix, ns] : g_.prefixes()) {
      const auto& n = ns.value();
      if (n.size() > best_len && v.starts_with(n) &&
          is_simple_local(std::string_view(v).substr(n.size()))) {
        best_prefix = &prefix;
        best_len = n.size();
      }
    }
    if (best_prefix) return *best_prefix + ":" + v.substr(best_len);
    return "<" + v + ">";
  }

  std::string term(const Term& t) const {
    if (const auto* i = std::get_if<Iri>(&t)) return iri(*i);
    if (is_blank(t)) return to_ntriples(t);
    const auto& lit = std::get<Literal>(t);
    const auto quoted = "\"" + escape_lexical(lit.lexical()) + "\"";
    if (lit.language()) return quoted + "@" + *lit.language();
    if (lit.datatype().value() == vocab::kXsdString) return quoted;
    return quoted + "^^" + iri(lit.datatype());
  }

  void write_block(std::string& out, Graph::TripleSet::const_iterator begin,
                   Graph::TripleSet::const_iterator end) const {
    // rdf:type first, then predicates in IRI order.
    std::map<std::pair<int, std::string>, std::vector<const Term*>> by_predicate;
    for (auto it = begin; it != end; ++it) {
      const auto& p = it->predicate().value();
      by_predicate[{p == vocab::kRdfType ? 0 : 1, p}].push_back(&it->object());
    }
    out += term(begin->subject());
    bool first = true;
    for (const auto& [key, objects] : by_predicate) {
      out += first ? " " : " ;\n    ";
      first = false;
      out += key.first == 0 ? "a" : iri(Iri::make(key.second));
      for (std::size_t i = 0; i < objects.size(); ++i) {
        out += i == 0 ? " " : ", ";
        out += term(*objects[i]);
      }
    }
    out += " .\n";
  }

  const Graph& g_;
};

}  // namespace

std::string serialize(const Graph& g, Format format) {
  if (format == Format::Turtle) return TurtleWriter(g).write();
  std::string out;
  for (const auto& line : canonical_lines(g)) {
    out += line;
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsers

namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  bool starts_with(std::string_view s) const { return text_.substr(pos_).starts_with(s); }

  char get() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && !done(); ++i) get();
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::SyntaxError, msg, line_, col_);
  }
  [[noreturn]] void unsupported(const std::string& msg) const {
    throw Error(ErrorCode::UnsupportedConstruct, msg, line_, col_);
  }

  void expect(char c) {
    if (peek() != c || done()) fail(std::string("expected '") + c + "'");
    get();
  }

  std::size_t line() const { return line_; }

  std::uint32_t hex(int digits) {
    std::uint32_t v = 0;
    for (int i = 0; i < digits; ++i) {
      const char c = done() ? '\0' : get();
      v <<= 4;
      if (c >= '0' && c <= '9') v |= static_cast<std::uint32_t>(c - '0');
      else if (c >= 'a' && c <= 'f') v |= static_cast<std::uint32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') v |= static_cast<std::uint32_t>(c - 'A' + 10);
      else fail("invalid hex digit in escape");
    }
    return v;
  }

  // Reads <...> including unicode escapes.
  Iri iriref() {
    const auto line = line_;
    const auto col = col_;
    expect('<');
    std::string value;
    while (true) {
      if (done() || peek() == '\n') fail("unterminated IRI");
      const char c = get();
      if (c == '>') break;
      if (c == '\\') {
        const char e = done() ? '\0' : get();
        if (e == 'u') append_utf8(value, hex(4));
        else if (e == 'U') append_utf8(value, hex(8));
        else fail("invalid escape in IRI");
      } else {
        value += c;
      }
    }
    if (!Iri::is_valid(value)) {
      throw Error(ErrorCode::SyntaxError, "invalid or relative IRI <" + value + ">",
                  line, col);
    }
    return Iri::make(value);
  }

  BlankNode blank() {
    expect('_');
    expect(':');
    std::string label;
    while (!done() && (is_alpha(peek()) || is_digit(peek()) || peek() == '_' ||
                       peek() == '-' || (peek() == '.' && label_continues()))) {
      label += get();
    }
    if (label.empty()) fail("empty blank node label");
    if (!BlankNode::is_valid_label(label)) {
      unsupported("blank node label '" + label + "' outside [A-Za-z][A-Za-z0-9]*");
    }
    return BlankNode::make(label);
  }

  // Quoted string; `allow_single` and long-quote forms are Turtle only.
  std::string quoted(bool turtle) {
    const char q = peek();
    if (q != '"' && !(turtle && q == '\'')) fail("expected string");
    const std::string triple(3, q);
    const bool long_form = turtle && starts_with(triple);
    advance(long_form ? 3 : 1);
    std::string value;
    while (true) {
      if (done()) fail("unterminated string");
      if (long_form) {
        if (starts_with(triple) && peek(3) != q) {
          advance(3);
          break;
        }
      } else if (peek() == q) {
        get();
        break;
      } else if (peek() == '\n' || peek() == '\r') {
        fail("newline in string");
      }
      const char c = get();
      if (c != '\\') {
        value += c;
        continue;
      }
      if (done()) fail("unterminated escape");
      switch (const char e = get()) {
        case 't': value += '\t'; break;
        case 'b': value += '\b'; break;
        case 'n': value += '\n'; break;
        case 'r': value += '\r'; break;
        case 'f': value += '\f'; break;
        case '"': value += '"'; break;
        case '\'': value += '\''; break;
        case '\\': value += '\\'; break;
        case 'u': append_utf8(value, hex(4)); break;
        case 'U': append_utf8(value, hex(8)); break;
        default: fail(std::string("invalid escape '\\") + e + "'");
      }
    }
    return value;
  }

  std::string langtag() {
    expect('@');
    std::string tag;
    while (!done() && (is_alpha(peek()) || is_digit(peek()) || peek() == '-')) {
      tag += get();
    }
    if (tag.empty()) fail("empty language tag");
    return tag;
  }

 private:
  bool label_continues() const {
    const char n = peek(1);
    return is_alpha(n) || is_digit(n) || n == '_' || n == '-';
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

Literal make_literal(Cursor& c, const std::string& lexical, std::optional<std::string> lang,
                     std::optional<Iri> datatype) {
  try {
    if (lang) return Literal::lang(lexical, *lang);
    if (datatype) return Literal::typed(lexical, *datatype);
    return Literal::plain(lexical);
  } catch (const Error& e) {
    c.fail(e.what());
  }
}

// N-Triples -----------------------------------------------------------------

class NTriplesParser {
 public:
  explicit NTriplesParser(std::string_view text) : c_(text) {}

  Graph run() {
    Graph g;
    while (true) {
      skip_inline_space();
      if (c_.done()) break;
      if (c_.peek() == '#') {
        skip_comment();
        continue;
      }
      if (c_.peek() == '\n' || c_.peek() == '\r') {
        c_.get();
        continue;
      }
      g.insert(statement());
    }
    return g;
  }

 private:
  void skip_inline_space() {
    while (!c_.done() && (c_.peek() == ' ' || c_.peek() == '\t')) c_.get();
  }
  void skip_comment() {
    while (!c_.done() && c_.peek() != '\n') c_.get();
  }

  Term subject() {
    if (c_.peek() == '<') return c_.iriref();
    if (c_.peek() == '_') return c_.blank();
    c_.fail("expected subject IRI or blank node");
  }

  Term object() {
    if (c_.peek() == '<') return c_.iriref();
    if (c_.peek() == '_') return c_.blank();
    if (c_.peek() == '"') {
      auto lexical = c_.quoted(false);
      if (c_.peek() == '@') return make_literal(c_, lexical, c_.langtag(), std::nullopt);
      if (c_.starts_with("^^")) {
        c_.advance(2);
        return make_literal(c_, lexical, std::nullopt, c_.iriref());
      }
      return make_literal(c_, lexical, std::nullopt, std::nullopt);
    }
    if (c_.starts_with("<<")) c_.unsupported("quoted triples are not supported");
    c_.fail("expected object");
  }

  Triple statement() {
    auto s = subject();
    skip_inline_space();
    if (c_.peek() != '<') c_.fail("expected predicate IRI");
    auto p = c_.iriref();
    skip_inline_space();
    auto o = object();
    skip_inline_space();
    c_.expect('.');
    skip_inline_space();
    if (c_.peek() == '#') skip_comment();
    if (c_.peek() == '\r') c_.get();
    if (!c_.done() && c_.peek() != '\n') c_.fail("trailing content after statement");
    return Triple(std::move(s), std::move(p), std::move(o));
  }

  Cursor c_;
};

// Turtle --------------------------------------------------------------------

class TurtleParser {
 public:
  explicit TurtleParser(std::string_view text) : c_(text) {}

  Graph run() {
    while (true) {
      skip_ws();
      if (c_.done()) break;
      if (c_.peek() == '@') {
        at_directive();
      } else if (keyword("PREFIX")) {
        prefix_decl(false);
      } else if (keyword("BASE")) {
        c_.unsupported("BASE declarations are not supported");
      } else {
        triples();
        skip_ws();
        c_.expect('.');
      }
    }
    return std::move(g_);
  }

 private:
  void skip_ws() {
    while (!c_.done()) {
      const char ch = c_.peek();
      if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') {
        c_.get();
      } else if (ch == '#') {
        while (!c_.done() && c_.peek() != '\n') c_.get();
      } else {
        break;
      }
    }
  }

  // Case-insensitive SPARQL-style keyword followed by whitespace.
  bool keyword(std::string_view kw) const {
    for (std::size_t i = 0; i < kw.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(c_.peek(i))) != kw[i]) return false;
    }
    const char after = c_.peek(kw.size());
    return after == ' ' || after == '\t' || after == '\n' || after == '\r';
  }

  void at_directive() {
    if (c_.starts_with("@prefix")) {
      c_.advance(7);
      prefix_decl(true);
    } else if (c_.starts_with("@base")) {
      c_.unsupported("@base declarations are not supported");
    } else {
      c_.fail("unknown directive");
    }
  }

  void prefix_decl(bool at_form) {
    if (!at_form) c_.advance(6);
    skip_ws();
    std::string prefix;
    while (!c_.done() && c_.peek() != ':') {
      const char ch = c_.peek();
      if (!(is_alpha(ch) || is_digit(ch) || ch == '_' || ch == '-' || ch == '.')) {
        c_.fail("invalid prefix name");
      }
      prefix += c_.get();
    }
    c_.expect(':');
    skip_ws();
    auto ns = c_.iriref();
    if (at_form) {
      skip_ws();
      c_.expect('.');
    }
    try {
      g_.set_prefix(prefix, ns);
    } catch (const Error& e) {
      c_.fail(e.what());
    }
  }

  Iri prefixed_name() {
    std::string prefix;
    while (!c_.done() && c_.peek() != ':') {
      const char ch = c_.peek();
      if (!(is_alpha(ch) || is_digit(ch) || ch == '_' || ch == '-' || ch == '.')) {
        c_.fail(std::string("unexpected character '") + ch + "'");
      }
      prefix += c_.get();
    }
    c_.expect(':');
    std::string local;
    while (!c_.done()) {
      const char ch = c_.peek();
      const bool body = is_alpha(ch) || is_digit(ch) || ch == '_' || ch == '-' ||
                        ch == ':' || ch == '%' ||
                        static_cast<unsigned char>(ch) >= 0x80;
      if (body) {
        local += c_.get();
      } else if (ch == '.' && !local.empty()) {
        const char n = c_.peek(1);
        if (is_alpha(n) || is_digit(n) || n == '_' || n == '-' || n == ':') {
          local += c_.get();
        } else {
          break;
        }
      } else if (ch == '\\') {
        c_.unsupported("escaped characters in prefixed names are not supported");
      } else {
        break;
      }
    }
    auto it = g_.prefixes().find(prefix);
    if (it == g_.prefixes().end()) c_.fail("undeclared prefix '" + prefix + "'");
    const auto full = it->second.value() + local;
    if (!Iri::is_valid(full)) c_.fail("invalid IRI from prefixed name: " + full);
    return Iri::make(full);
  }

  Iri iri() {
    if (c_.peek() == '<') {
      if (c_.peek(1) == '<') c_.unsupported("quoted triples are not supported");
      return c_.iriref();
    }
    return prefixed_name();
  }

  void reject_structures() {
    const char ch = c_.peek();
    if (ch == '[') c_.unsupported("anonymous blank nodes are not supported");
    if (ch == '(') c_.unsupported("collections are not supported");
    if (c_.starts_with("<<")) c_.unsupported("quoted triples are not supported");
  }

  Term subject() {
    reject_structures();
    if (c_.peek() == '_' && c_.peek(1) == ':') return c_.blank();
    return iri();
  }

  Iri verb() {
    if (c_.peek() == 'a') {
      const char n = c_.peek(1);
      if (n == ' ' || n == '\t' || n == '\n' || n == '\r' || n == '<' || n == '"') {
        c_.get();
        return Iri::make(vocab::kRdfType);
      }
    }
    reject_structures();
    return iri();
  }

  bool word(std::string_view w) const {
    if (!c_.starts_with(w)) return false;
    const char n = c_.peek(w.size());
    return !(is_alpha(n) || is_digit(n) || n == '_' || n == '-' || n == ':');
  }

  Term number() {
    std::string lex;
    if (c_.peek() == '+' || c_.peek() == '-') lex += c_.get();
    while (is_digit(c_.peek())) lex += c_.get();
    bool decimal = false;
    if (c_.peek() == '.' && is_digit(c_.peek(1))) {
      decimal = true;
      lex += c_.get();
      while (is_digit(c_.peek())) lex += c_.get();
    }
    bool exponent = false;
    if (c_.peek() == 'e' || c_.peek() == 'E') {
      exponent = true;
      lex += c_.get();
      if (c_.peek() == '+' || c_.peek() == '-') lex += c_.get();
      if (!is_digit(c_.peek())) c_.fail("malformed exponent");
      while (is_digit(c_.peek())) lex += c_.get();
    }
    const auto dt = exponent ? vocab::kXsdDouble
                    : decimal ? vocab::kXsdDecimal
                              : vocab::kXsdInteger;
    return make_literal(c_, lex, std::nullopt, Iri::make(dt));
  }

  Term object() {
    reject_structures();
    const char ch = c_.peek();
    if (ch == '_' && c_.peek(1) == ':') return c_.blank();
    if (ch == '"' || ch == '\'') {
      auto lexical = c_.quoted(true);
      if (c_.peek() == '@') return make_literal(c_, lexical, c_.langtag(), std::nullopt);
      if (c_.starts_with("^^")) {
        c_.advance(2);
        return make_literal(c_, lexical, std::nullopt, iri());
      }
      return make_literal(c_, lexical, std::nullopt, std::nullopt);
    }
    if (is_digit(ch) || ch == '+' || ch == '-' || (ch == '.' && is_digit(c_.peek(1)))) {
      return number();
    }
    if (word("true") || word("false")) {
      const bool t = word("true");
      c_.advance(t ? 4 : 5);
      return Literal::typed(t ? "true" : "false", Iri::make(vocab::kXsdBoolean));
    }
    return iri();
  }

  void triples() {
    auto s = subject();
    while (true) {
      skip_ws();
      auto p = verb();
      while (true) {
        skip_ws();
        g_.insert(Triple(s, p, object()));
        skip_ws();
        if (c_.peek() != ',') break;
        c_.get();
      }
      if (c_.peek() != ';') break;
      while (c_.peek() == ';') {
        c_.get();
        skip_ws();
      }
      if (c_.peek() == '.' || c_.peek() == ']') break;
    }
  }

  Cursor c_;
  Graph g_;
};

}  // namespace

Graph parse(std::string_view text, Format format) {
  if (format == Format::NTriples) return NTriplesParser(text).run();
  return TurtleParser(text).run();
}

}  // namespace omerdf::rdf
