#include "omerdf/xml/dom.hpp"

#include <algorithm>
#include <cstdint>

#include "omerdf/error.hpp"

namespace omerdf::xml {

std::string_view Element::local_name() const {
  std::string_view n = name;
  const auto colon = n.find(':');
  return colon == std::string_view::npos ? n : n.substr(colon + 1);
}

std::optional<std::string_view> Element::attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return std::string_view(v);
  }
  return std::nullopt;
}

std::vector<const Element*> Element::children_named(std::string_view local) const {
  std::vector<const Element*> out;
  for (const auto& c : children) {
    if (c.local_name() == local) out.push_back(&c);
  }
  return out;
}

const Element* Element::first_child(std::string_view local) const {
  for (const auto& c : children) {
    if (c.local_name() == local) return &c;
  }
  return nullptr;
}

namespace {

bool is_name_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' || c == ':' ||
         static_cast<unsigned char>(c) >= 0x80;
}
bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

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

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Element document() {
    if (starts_with("\xEF\xBB\xBF")) advance(3);
    misc();
    if (starts_with("<!DOCTYPE")) fail("DOCTYPE declarations are not supported");
    if (done() || peek() != '<') fail("missing root element");
    Element root = element();
    misc();
    if (!done()) fail("content after the root element");
    return root;
  }

 private:
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
    throw Error(ErrorCode::MalformedXml, msg, line_, col_);
  }
  void skip_space() {
    while (!done() && is_space(peek())) get();
  }
  void expect(std::string_view s) {
    if (!starts_with(s)) fail("expected '" + std::string(s) + "'");
    advance(s.size());
  }

  void skip_until(std::string_view terminator, const char* what) {
    while (!starts_with(terminator)) {
      if (done()) fail(std::string("unterminated ") + what);
      get();
    }
    advance(terminator.size());
  }

  // Whitespace, comments and processing instructions outside the root.
  void misc() {
    while (true) {
      skip_space();
      if (starts_with("<!--")) {
        comment();
      } else if (starts_with("<?")) {
        advance(2);
        skip_until("?>", "processing instruction");
      } else {
        return;
      }
    }
  }

  void comment() {
    advance(4);
    skip_until("-->", "comment");
  }

  std::string name() {
    if (done() || !is_name_start(peek())) fail("expected a name");
    std::string n;
    while (!done() && is_name_char(peek())) n += get();
    return n;
  }

  void reference(std::string& out) {
    get();  // '&'
    std::string ref;
    while (!done() && peek() != ';') {
      if (ref.size() > 10) fail("unterminated entity reference");
      ref += get();
    }
    if (done()) fail("unterminated entity reference");
    get();
    if (ref == "lt") out += '<';
    else if (ref == "gt") out += '>';
    else if (ref == "amp") out += '&';
    else if (ref == "quot") out += '"';
    else if (ref == "apos") out += '\'';
    else if (ref.size() > 1 && ref[0] == '#') {
      std::uint32_t cp = 0;
      const bool hex = ref[1] == 'x';
      const auto digits = std::string_view(ref).substr(hex ? 2 : 1);
      if (digits.empty()) fail("empty character reference");
      for (char c : digits) {
        std::uint32_t d;
        if (c >= '0' && c <= '9') d = static_cast<std::uint32_t>(c - '0');
        else if (hex && c >= 'a' && c <= 'f') d = static_cast<std::uint32_t>(c - 'a' + 10);
        else if (hex && c >= 'A' && c <= 'F') d = static_cast<std::uint32_t>(c - 'A' + 10);
        else fail("invalid character reference");
        cp = cp * (hex ? 16 : 10) + d;
        if (cp > 0x10FFFF) fail("character reference out of range");
      }
      append_utf8(out, cp);
    } else {
      fail("undefined entity '&" + ref + ";'");
    }
  }

  std::string attribute_value() {
    const char quote = peek();
    if (quote != '"' && quote != '\'') fail("expected quoted attribute value");
    get();
    std::string value;
    while (true) {
      if (done()) fail("unterminated attribute value");
      const char c = peek();
      if (c == quote) {
        get();
        break;
      }
      if (c == '<') fail("'<' in attribute value");
      if (c == '&') {
        reference(value);
      } else {
        value += get();
      }
    }
    return value;
  }

  Element element() {
    Element el;
    el.line = line_;
    expect("<");
    el.name = name();
    while (true) {
      const bool had_space = !done() && is_space(peek());
      skip_space();
      if (starts_with("/>")) {
        advance(2);
        return el;
      }
      if (peek() == '>') {
        get();
        break;
      }
      if (!had_space) fail("expected whitespace before attribute");
      auto key = name();
      skip_space();
      expect("=");
      skip_space();
      auto value = attribute_value();
      if (el.attribute(key)) fail("duplicate attribute '" + key + "'");
      el.attributes.emplace_back(std::move(key), std::move(value));
    }
    content(el);
    return el;
  }

  void content(Element& el) {
    while (true) {
      if (done()) fail("unclosed element <" + el.name + ">");
      if (starts_with("</")) {
        advance(2);
        const auto close = name();
        if (close != el.name) {
          fail("mismatched closing tag </" + close + "> for <" + el.name + ">");
        }
        skip_space();
        expect(">");
        return;
      }
      if (starts_with("<!--")) {
        comment();
      } else if (starts_with("<![CDATA[")) {
        advance(9);
        while (!starts_with("]]>")) {
          if (done()) fail("unterminated CDATA section");
          el.text += get();
        }
        advance(3);
      } else if (starts_with("<?")) {
        advance(2);
        skip_until("?>", "processing instruction");
      } else if (starts_with("<!")) {
        fail("unsupported markup declaration");
      } else if (peek() == '<') {
        el.children.push_back(element());
      } else if (peek() == '&') {
        reference(el.text);
      } else {
        el.text += get();
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace

Element parse_document(std::string_view text) { return Reader(text).document(); }

}  // namespace omerdf::xml
